"""Rational function fields F_p(u_1..u_k) with reduced-fraction elements."""
from __future__ import annotations

from .poly import MPoly, PolyRing, PrimeField, exact_div, format_poly, poly_gcd


class FunctionField:
    """F_p(params). Elements are :class:`FieldElem`; numerators and
    denominators are polynomials in ``self.pring`` = F_p[params]."""

    is_prime = False

    def __init__(self, p: int, params):
        self.params = tuple(params)
        if not self.params:
            raise ValueError("a function field needs at least one parameter")
        self.prime = PrimeField(p)
        self.p = p
        self.pring = PolyRing(self.prime, self.params)
        self._key = (p, self.params)
        self.zero = FieldElem(self, self.pring.zero(), self.pring.one(), _reduced=True)
        self.one = FieldElem(self, self.pring.one(), self.pring.one(), _reduced=True)

    def __eq__(self, other):
        return isinstance(other, FunctionField) and other._key == self._key

    def __hash__(self):
        return hash(("FF",) + self._key)

    def __repr__(self):
        return f"F_{self.p}({','.join(self.params)})"

    @property
    def prime_field(self):
        return self.prime

    def __call__(self, a) -> "FieldElem":
        if isinstance(a, FieldElem):
            if a.field != self:
                raise TypeError(f"element of {a.field} is not in {self}")
            return a
        if isinstance(a, int):
            return FieldElem(self, self.pring.const(a), self.pring.one(), _reduced=True)
        if isinstance(a, MPoly) and a.ring == self.pring:
            return FieldElem(self, a, self.pring.one(), _reduced=True)
        raise TypeError(f"cannot coerce {a!r} into {self}")

    def param(self, name: str) -> "FieldElem":
        return self(self.pring.gen(name))

    def fraction(self, num: MPoly, den: MPoly) -> "FieldElem":
        return reduce_fraction(num, den, self)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return a.inverse()

    def div(self, a, b):
        return a * b.inverse()

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def frob(self, a, e: int = 1):
        return a.frobenius(e)

    def fmt(self, a) -> str:
        return a.format_coeff()[0]


def _normalize(field, num: MPoly, den: MPoly) -> "FieldElem":
    if num.is_zero():
        return field.zero
    lc = den.leading_coeff()
    if lc != 1:
        inv = field.prime.inv(lc)
        num, den = num.scale(inv), den.scale(inv)
    return FieldElem(field, num, den, _reduced=True)


def reduce_fraction(num: MPoly, den: MPoly, field: FunctionField | None = None) -> "FieldElem":
    """Reduced fraction with monic denominator (graded-lex leading coefficient 1)."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.ring != den.ring:
        raise ValueError("numerator and denominator live in different rings")
    if field is None:
        field = FunctionField(num.ring.p, num.ring.names)
    if num.is_zero():
        return field.zero
    g = poly_gcd(num, den)
    if not g.is_constant():
        num, den = exact_div(num, g), exact_div(den, g)
    return _normalize(field, num, den)


class FieldElem:
    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: FunctionField, num: MPoly, den: MPoly, _reduced=False):
        self.field = field
        self._hash = None
        if _reduced:
            self.num, self.den = num, den
            return
        r = reduce_fraction(num, den, field)
        self.num, self.den = r.num, r.den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_constant() and self.num == self.den

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError(f"field mismatch: {self.field} vs {other.field}")
            return other
        if isinstance(other, int):
            return self.field(other)
        raise TypeError

    def __eq__(self, other):
        if isinstance(other, (FieldElem, int)):
            try:
                other = self._coerce(other)
            except ValueError:
                return False
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.num, self.den))
        return self._hash

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            num = self.num + o.num
            if self.den.is_constant():
                return _normalize(self.field, num, self.den) if num else self.field.zero
            return reduce_fraction(num, self.den, self.field)
        if self.den.is_constant():
            return _normalize(self.field, self.num * o.den + o.num, o.den)
        if o.den.is_constant():
            return _normalize(self.field, self.num + o.num * self.den, self.den)
        g = poly_gcd(self.den, o.den)
        da, db = exact_div(self.den, g), exact_div(o.den, g)
        num = self.num * db + o.num * da
        return reduce_fraction(num, da * o.den, self.field)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, -self.num, self.den, _reduced=True)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return self.field.zero
        if self.den.is_constant() and o.den.is_constant():
            return FieldElem(self.field, self.num * o.num, self.den, _reduced=True)
        n1, d2 = self.num, o.den
        n2, d1 = o.num, self.den
        if not d2.is_constant():
            g = poly_gcd(n1, d2)
            if not g.is_constant():
                n1, d2 = exact_div(n1, g), exact_div(d2, g)
        if not d1.is_constant():
            g = poly_gcd(n2, d1)
            if not g.is_constant():
                n2, d1 = exact_div(n2, g), exact_div(d1, g)
        return _normalize(self.field, n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return _normalize(self.field, self.den, self.num)

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FieldElem(self.field, self.num ** n, self.den ** n, _reduced=True) if n else self.field.one

    def frobenius(self, e: int = 1) -> "FieldElem":
        # p^e-th powers of coprime polynomials stay coprime; leading coefficients stay 1.
        return FieldElem(self.field, self.num.frobenius(e), self.den.frobenius(e), _reduced=True)

    def format_coeff(self):
        """(text, is_atomic) for use as a polynomial coefficient."""
        if self.den.is_constant():
            if self.num.is_constant():
                return str(self.num.constant_coeff()), True
            return f"({format_poly(self.num)})", True
        return f"({format_poly(self.num)})/({format_poly(self.den)})", True

    def __repr__(self):
        return f"FieldElem({self})"

    def __str__(self):
        if self.den.is_constant():
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


def make_field(p: int, params=()):
    """F_p when ``params`` is empty, otherwise F_p(params)."""
    return FunctionField(p, params) if params else PrimeField(p)
