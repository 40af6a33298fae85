"""Sparse multivariate polynomials over F_p or F_p(u_1..u_k).

A polynomial is a dict from exponent tuples to nonzero coefficients. The
coefficient field is either a :class:`PrimeField` (coefficients are plain
ints in ``range(p)``) or a function field whose elements support the usual
arithmetic operators. Monomials are ordered graded-lexicographically with
the first declared variable largest.
"""
from __future__ import annotations

from functools import reduce
from itertools import product


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


class PrimeField:
    """F_p with elements represented as ints in range(p)."""

    is_prime = True
    params: tuple = ()

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p}")
        self.p = p
        self.zero = 0
        self.one = 1

    def __call__(self, a):
        if isinstance(a, int):
            return a % self.p
        raise TypeError(f"cannot coerce {a!r} into F_{self.p}")

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"F_{self.p}"

    @property
    def prime_field(self):
        return self

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def frob(self, a, e: int = 1):
        return a

    def fmt(self, a) -> str:
        return str(a)


def grlex_key(m):
    return (sum(m), m)


class PolyRing:
    """Polynomial ring descriptor.

    ``ring_vars`` are the variables an HS-derivation acts on; ``ext_vars`` are
    base-extension variables (the t_i of L = k[t]) which derivations fix.
    All variables share one graded-lex order, ring variables first.
    """

    def __init__(self, field, ring_vars, ext_vars=()):
        self.field = field
        self.ring_vars = tuple(ring_vars)
        self.ext_vars = tuple(ext_vars)
        self.names = self.ring_vars + self.ext_vars
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        clash = set(self.names) & set(getattr(field, "params", ()))
        if clash:
            raise ValueError(f"variables clash with parameters: {sorted(clash)}")
        self.nvars = len(self.names)
        self.n_ring = len(self.ring_vars)
        self.unit = (0,) * self.nvars
        self._key = (field, self.ring_vars, self.ext_vars)
        self._hash = hash(self._key)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        ext = f"; ext {','.join(self.ext_vars)}" if self.ext_vars else ""
        return f"{self.field!r}[{','.join(self.ring_vars)}{ext}]"

    @property
    def p(self) -> int:
        return self.field.p

    def zero(self) -> "MPoly":
        return MPoly(self, {}, _clean=True)

    def one(self) -> "MPoly":
        return self.const(self.field.one)

    def const(self, c) -> "MPoly":
        c = self.field(c)
        if self.field.is_zero(c):
            return self.zero()
        return MPoly(self, {self.unit: c}, _clean=True)

    def monomial(self, exps, c=1) -> "MPoly":
        c = self.field(c)
        if self.field.is_zero(c):
            return self.zero()
        return MPoly(self, {tuple(exps): c}, _clean=True)

    def var_index(self, name: str) -> int:
        return self.names.index(name)

    def gen(self, name_or_index) -> "MPoly":
        i = name_or_index if isinstance(name_or_index, int) else self.var_index(name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return self.monomial(e)

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def ring_gens(self):
        return [self.gen(i) for i in range(self.n_ring)]

    def base_ring(self) -> "PolyRing":
        """The same ring without extension variables."""
        return PolyRing(self.field, self.ring_vars)

    def with_ext(self, ext_vars) -> "PolyRing":
        return PolyRing(self.field, self.ring_vars, tuple(ext_vars))

    def with_field(self, field) -> "PolyRing":
        return PolyRing(field, self.ring_vars, self.ext_vars)

    def monomials_up_to(self, degree: int, indices=None):
        """Exponent tuples of total degree <= degree in the chosen variables."""
        idx = list(range(self.nvars)) if indices is None else list(indices)
        out = []
        for d in range(degree + 1):
            for combo in _compositions(d, len(idx)):
                e = [0] * self.nvars
                for i, k in zip(idx, combo):
                    e[i] = k
                out.append(tuple(e))
        out.sort(key=grlex_key)
        return out


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _madd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


class MPoly:
    """Immutable sparse polynomial. Use the ring's constructors to build."""

    __slots__ = ("ring", "_t", "_hash")

    def __init__(self, ring: PolyRing, terms=None, _clean=False):
        self.ring = ring
        self._hash = None
        if _clean:
            self._t = terms
            return
        K = ring.field
        t = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != ring.nvars:
                raise ValueError(f"monomial {m} has wrong arity for {ring}")
            c = K(c)
            if not K.is_zero(c):
                t[m] = c
        self._t = t

    # -- basic access -------------------------------------------------
    @property
    def terms(self) -> dict:
        return self._t

    def items_sorted(self):
        return sorted(self._t.items(), key=lambda mc: grlex_key(mc[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and self.ring.unit in self._t)

    def constant_coeff(self):
        return self._t.get(self.ring.unit, self.ring.field.zero)

    def coeff(self, mono):
        return self._t.get(tuple(mono), self.ring.field.zero)

    def leading_monomial(self):
        if not self._t:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._t, key=grlex_key)

    def leading_coeff(self):
        return self._t[self.leading_monomial()]

    def total_degree(self) -> int:
        if not self._t:
            return -1
        return max(sum(m) for m in self._t)

    def degree_in(self, indices) -> int:
        if not self._t:
            return -1
        return max(sum(m[i] for i in indices) for m in self._t)

    def ring_degree(self) -> int:
        return self.degree_in(range(self.ring.n_ring))

    def variables(self) -> set:
        return {i for m in self._t for i, e in enumerate(m) if e}

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.ring == other.ring and self._t == other._t
        if isinstance(other, int) or hasattr(other, "field"):
            try:
                return self == self.ring.const(other)
            except TypeError:
                return NotImplemented
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._t.items())))
        return self._hash

    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        return format_poly(self)

    # -- arithmetic ---------------------------------------------------
    def _check(self, other):
        if not isinstance(other, MPoly):
            other = self.ring.const(other)
        elif other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        try:
            other = self._check(other)
        except TypeError:
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        K = self.ring.field
        d = dict(self._t)
        if K.is_prime:
            p = K.p
            for m, c in other._t.items():
                v = (d.get(m, 0) + c) % p
                if v:
                    d[m] = v
                else:
                    d.pop(m, None)
        else:
            for m, c in other._t.items():
                if m in d:
                    v = d[m] + c
                    if v.is_zero():
                        del d[m]
                    else:
                        d[m] = v
                else:
                    d[m] = c
        return MPoly(self.ring, d, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        K = self.ring.field
        if K.is_prime:
            p = K.p
            return MPoly(self.ring, {m: (-c) % p for m, c in self._t.items()}, _clean=True)
        return MPoly(self.ring, {m: -c for m, c in self._t.items()}, _clean=True)

    def __sub__(self, other):
        try:
            other = self._check(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MPoly":
        K = self.ring.field
        c = K(c)
        if K.is_zero(c):
            return self.ring.zero()
        if K.is_prime:
            p = K.p
            return MPoly(self.ring, {m: (v * c) % p for m, v in self._t.items()}, _clean=True)
        return MPoly(self.ring, {m: v * c for m, v in self._t.items()}, _clean=True)

    def mul_term(self, mono, c) -> "MPoly":
        """Multiply by the single term c * mono."""
        K = self.ring.field
        if K.is_zero(c) or not self._t:
            return self.ring.zero()
        if K.is_prime:
            p = K.p
            return MPoly(self.ring, {_madd(m, mono): (v * c) % p for m, v in self._t.items()}, _clean=True)
        return MPoly(self.ring, {_madd(m, mono): v * c for m, v in self._t.items()}, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        a, b = self._t, other._t
        if not a or not b:
            return self.ring.zero()
        if len(a) == 1:
            (m, c), = a.items()
            return other.mul_term(m, c)
        if len(b) == 1:
            (m, c), = b.items()
            return self.mul_term(m, c)
        K = self.ring.field
        d = {}
        if K.is_prime:
            for ma, ca in a.items():
                for mb, cb in b.items():
                    m = tuple(x + y for x, y in zip(ma, mb))
                    d[m] = d.get(m, 0) + ca * cb
            p = K.p
            d = {m: c % p for m, c in d.items() if c % p}
        else:
            for ma, ca in a.items():
                for mb, cb in b.items():
                    m = tuple(x + y for x, y in zip(ma, mb))
                    if m in d:
                        d[m] = d[m] + ca * cb
                    else:
                        d[m] = ca * cb
            d = {m: c for m, c in d.items() if not c.is_zero()}
        return MPoly(self.ring, d, _clean=True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def monic(self) -> "MPoly":
        if not self._t:
            return self
        K = self.ring.field
        return self.scale(K.inv(self.leading_coeff()))

    def map_coeffs(self, fn, ring=None) -> "MPoly":
        ring = ring or self.ring
        return MPoly(ring, {m: fn(c) for m, c in self._t.items()})

    def embed(self, ring: PolyRing, index_map, coeff_map=None) -> "MPoly":
        """Re-express in ``ring``; variable i goes to position index_map[i]."""
        out = {}
        for m, c in self._t.items():
            e = [0] * ring.nvars
            for i, k in enumerate(m):
                if k:
                    e[index_map[i]] += k
            out[tuple(e)] = coeff_map(c) if coeff_map else c
        return MPoly(ring, out)

    def frobenius(self, e: int = 1) -> "MPoly":
        """f^(p^e), computed termwise (the p^e-power map is additive)."""
        q = self.ring.p ** e
        K = self.ring.field
        return MPoly(
            self.ring,
            {tuple(k * q for k in m): K.frob(c, e) for m, c in self._t.items()},
            _clean=True,
        )

    def partial(self, i: int) -> "MPoly":
        K = self.ring.field
        out = {}
        for m, c in self._t.items():
            k = m[i]
            if k == 0:
                continue
            v = c * K(k) if not K.is_prime else (c * k) % K.p
            if K.is_zero(v):
                continue
            mm = list(m)
            mm[i] -= 1
            out[tuple(mm)] = v
        return MPoly(self.ring, out, _clean=True)

    def hasse(self, beta) -> "MPoly":
        """Hasse (divided-power) derivative: coefficient of e^beta in f(x+e)."""
        K = self.ring.field
        out = {}
        for m, c in self._t.items():
            factor = 1
            for k, b in zip(m, beta):
                if b > k:
                    factor = 0
                    break
                factor *= _binom(k, b)
            factor %= K.p
            if factor == 0:
                continue
            mm = tuple(k - b for k, b in zip(m, beta))
            out[mm] = (c * factor) % K.p if K.is_prime else c * K(factor)
        return MPoly(self.ring, out, _clean=True)

    def split_by(self, indices):
        """Group terms by the exponents at ``indices``.

        Returns {sub-exponent tuple: MPoly with those exponents zeroed}.
        """
        groups = {}
        for m, c in self._t.items():
            key = tuple(m[i] for i in indices)
            mm = list(m)
            for i in indices:
                mm[i] = 0
            groups.setdefault(key, {})[tuple(mm)] = c
        return {k: MPoly(self.ring, v, _clean=True) for k, v in groups.items()}


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    r = 1
    for i in range(k):
        r = r * (n - i) // (i + 1)
    return r


# -- formatting ----------------------------------------------------------

def format_monomial(names, m) -> str:
    parts = []
    for name, k in zip(names, m):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_poly(f: MPoly) -> str:
    if not f._t:
        return "0"
    K = f.ring.field
    out = []
    for m, c in f.items_sorted():
        mono = format_monomial(f.ring.names, m)
        cs = str(c) if K.is_prime else c.format_coeff()[0]
        if not mono:
            out.append(cs)
        elif cs == "1":
            out.append(mono)
        else:
            out.append(f"{cs}*{mono}")
    return " + ".join(out)


# -- exact division and gcd over F_p ------------------------------------

def divmod_poly(f: MPoly, g: MPoly):
    """Division with remainder by a single divisor (graded-lex)."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    K = f.ring.field
    lm = g.leading_monomial()
    lc_inv = K.inv(g._t[lm])
    q, r = {}, {}
    rem = dict(f._t)
    neg_g = -g
    while rem:
        m = max(rem, key=grlex_key)
        c = rem[m]
        if _divides(lm, m):
            qm = tuple(a - b for a, b in zip(m, lm))
            qc = K.mul(c, lc_inv) if K.is_prime else c * lc_inv
            q[qm] = qc
            step = neg_g.mul_term(qm, qc)
            for mm, cc in step._t.items():
                if mm in rem:
                    v = K.add(rem[mm], cc) if K.is_prime else rem[mm] + cc
                    if K.is_zero(v):
                        del rem[mm]
                    else:
                        rem[mm] = v
                else:
                    rem[mm] = cc
        else:
            r[m] = c
            del rem[m]
    return MPoly(f.ring, q, _clean=True), MPoly(f.ring, r, _clean=True)


def exact_div(f: MPoly, g: MPoly) -> MPoly:
    q, r = divmod_poly(f, g)
    if not r.is_zero():
        raise ArithmeticError(f"{g} does not divide {f}")
    return q


def _monomial_gcd(ring, monos):
    return tuple(min(m[i] for m in monos) for i in range(ring.nvars))


def _var_degree(f: MPoly, v: int) -> int:
    return max((m[v] for m in f._t), default=-1)


def _coeff_in(f: MPoly, v: int, k: int) -> MPoly:
    out = {}
    for m, c in f._t.items():
        if m[v] == k:
            mm = list(m)
            mm[v] = 0
            out[tuple(mm)] = c
    return MPoly(f.ring, out, _clean=True)


def _content_in(f: MPoly, v: int) -> MPoly:
    groups = f.split_by([v])
    return reduce(poly_gcd, groups.values())


def _prem(a: MPoly, b: MPoly, v: int) -> MPoly:
    db = _var_degree(b, v)
    lcb = _coeff_in(b, v, db)
    d = _var_degree(a, v) - db + 1
    r = a
    unit = [0] * a.ring.nvars
    while not r.is_zero() and _var_degree(r, v) >= db:
        dr = _var_degree(r, v)
        lr = _coeff_in(r, v, dr)
        shift = list(unit)
        shift[v] = dr - db
        r = lcb * r - (lr * b).mul_term(tuple(shift), 1)
        d -= 1
    if d > 0:
        r = (lcb ** d) * r
    return r


def poly_gcd(f: MPoly, g: MPoly) -> MPoly:
    """Monic gcd of polynomials over a prime field (recursive primitive PRS)."""
    if f.ring != g.ring:
        raise ValueError("ring mismatch")
    if not f.ring.field.is_prime:
        raise TypeError("poly_gcd works over a prime field")
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    ring = f.ring
    if f.is_constant() or g.is_constant():
        return ring.one()
    if len(f) == 1 or len(g) == 1:
        mono = _monomial_gcd(ring, list(f._t) + list(g._t))
        return ring.monomial(mono)
    vf, vg = f.variables(), g.variables()
    if vf - vg:
        return poly_gcd(_content_in(f, min(vf - vg)), g)
    if vg - vf:
        return poly_gcd(f, _content_in(g, min(vg - vf)))
    v = min(vf)
    cf, cg = _content_in(f, v), _content_in(g, v)
    c = poly_gcd(cf, cg)
    a, b = exact_div(f, cf), exact_div(g, cg)
    if _var_degree(a, v) < _var_degree(b, v):
        a, b = b, a
    while not b.is_zero():
        r = _prem(a, b, v)
        a = b
        b = r if r.is_zero() else exact_div(r, _content_in(r, v))
    a = exact_div(a, _content_in(a, v))
    return (c * a).monic()


def monomials_in_box(nvars: int, bounds) -> list:
    """All exponent tuples with 0 <= e_i < bounds[i]."""
    return [tuple(e) for e in product(*(range(b) for b in bounds))]
