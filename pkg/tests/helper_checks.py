"""Exhaustive checks of the integer helpers, shared with the acceptance run."""
from __future__ import annotations

from itertools import product

from hsder.indexsets import c_set, c_set_max, is_power_of, n_beta, n_beta_search, p_set_member, prime_factors

PRIMES = (2, 3, 5)


def primes_of(n):
    return [q for q in range(2, n + 1) if n % q == 0 and all(q % r for r in range(2, q))]


def multi_indices(dim_max=2, entry_max=12):
    for dim in range(1, dim_max + 1):
        yield from product(range(entry_max + 1), repeat=dim)


def check_c_sets(m_max=64):
    count = 0
    for p in PRIMES:
        l = 1
        while p**l <= m_max:
            for i in range(1, p**l):
                s = c_set_max(p, l, i)
                assert c_set(p, l, i) == list(range(s + 1))
                assert i * p**s < p**l <= i * p ** (s + 1), ("C max", p, l, i)
                if not is_power_of(i, p):
                    assert i * p ** (s + 1) > p**l, ("strict bound", p, l, i)
                count += 1
            l += 1
    return count


def check_p_sets(m_max=64):
    count = 0
    for n in range(1, m_max + 1):
        qs = primes_of(n)
        assert [q for q, _ in prime_factors(n)] == qs
        for alpha in multi_indices():
            expect = any(all(a % q == 0 for a in alpha) for q in qs)
            assert p_set_member(n, alpha) == expect, ("P_n", n, alpha)
            count += 1
    return count


def check_n_beta(m_max=64):
    count = 0
    for m in range(2, m_max + 1):
        for beta in multi_indices():
            if not p_set_member(m, beta):
                continue
            found = n_beta_search(m, beta)
            assert found == [n_beta(m, beta)], ("n_beta", m, beta, found)
            count += 1
    return count


def check_disjointness(m_max=64):
    """No alpha outside P_n and eta outside P_s with alpha s = eta n for n != s."""
    count = 0
    for alpha in multi_indices():
        for n in range(1, m_max + 1):
            if p_set_member(n, alpha):
                continue
            for s in range(1, m_max + 1):
                if s == n or any((a * s) % n for a in alpha):
                    continue
                eta = tuple(a * s // n for a in alpha)
                assert p_set_member(s, eta), ("disjointness", n, s, alpha)
                count += 1
    return count


def check_floor_identities(m_max=64):
    count = 0
    for m in range(1, m_max + 1):
        for n in range(1, m + 1):
            assert (m // n + 1) * n - 1 >= m
            if m % n:
                assert m // n == (m - 1) // n
            else:
                assert m // n == (m - 1) // n + 1
                if n < m:
                    assert any((m // n) % q == 0 for q in primes_of(m))
            count += 1
    return count


def run_all(m_max=64) -> dict:
    return {
        "c_sets": check_c_sets(m_max),
        "p_sets": check_p_sets(m_max),
        "n_beta": check_n_beta(m_max),
        "disjointness": check_disjointness(m_max),
        "floor": check_floor_identities(m_max),
    }
