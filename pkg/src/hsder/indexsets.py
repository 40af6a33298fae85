"""Integer bookkeeping for the decompositions: C-set maxima, the sets P_n,
the exponent n_beta and the index set J(l, D)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .hs import INF, HSDerivation, order


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple:
    """{prime: exponent} of n >= 1, as sorted pairs."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            k = 0
            while n % q == 0:
                n //= q
                k += 1
            out.append((q, k))
        q += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def valuation(n: int, q: int) -> int:
    k = 0
    while n and n % q == 0:
        n //= q
        k += 1
    return k


def is_power_of(i: int, p: int) -> bool:
    """True for 1, p, p^2, ..."""
    if i < 1:
        return False
    while i % p == 0:
        i //= p
    return i == 1


def c_set(p: int, l: int, i: int) -> list:
    if not 1 <= i < p**l:
        raise ValueError(f"i={i} must satisfy 1 <= i < {p}^{l}")
    out = []
    j = 0
    while i * p**j < p**l:
        out.append(j)
        j += 1
    return out


def c_set_max(p: int, l: int, i: int) -> int:
    """Largest j with i * p^j < p^l."""
    return c_set(p, l, i)[-1]


def p_set_member(n: int, alpha) -> bool:
    """Some prime q | n divides every component of alpha."""
    return any(all(a % q == 0 for a in alpha) for q, _ in prime_factors(n))


def n_beta(m: int, beta) -> int:
    """The unique n | m, n < m, with beta * n / m outside P_n."""
    if m <= 1:
        raise ValueError("m must exceed 1")
    if not p_set_member(m, beta):
        raise ValueError(f"{tuple(beta)} is not in P_{m}")
    n = 1
    nonzero = [b for b in beta if b]
    for q, a in prime_factors(m):
        b = min((valuation(x, q) for x in nonzero), default=None)
        if b is None:
            continue  # the zero multi-index is divisible by every power
        if a > b:
            n *= q ** (a - b)
    return n


def n_beta_search(m: int, beta) -> list:
    """All n | m, n < m, with beta * n / m a multi-index outside P_n (brute force)."""
    out = []
    for n in range(1, m):
        if m % n:
            continue
        if any((b * n) % m for b in beta):
            continue
        alpha = [b * n // m for b in beta]
        if not p_set_member(n, alpha):
            out.append(n)
    return out


def j_set(p: int, l: int, D: HSDerivation) -> list:
    """{j : l(D) <= j <= p^l, p does not divide j}, in decreasing order."""
    start = order(D)
    if start is INF:
        return []
    return [j for j in range(p**l, start - 1, -1) if j % p]


@dataclass(frozen=True)
class IndexSets:
    p: int
    l: int

    def s(self, i: int) -> int:
        return c_set_max(self.p, self.l, i)

    def j_set(self, D: HSDerivation) -> list:
        return j_set(self.p, self.l, D)

    @staticmethod
    def in_p_set(n: int, alpha) -> bool:
        return p_set_member(n, alpha)

    @staticmethod
    def n_beta(m: int, beta) -> int:
        return n_beta(m, beta)
