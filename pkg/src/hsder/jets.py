"""Truncated power series A[mu]/(mu^{m+1}) and substitution maps."""
from __future__ import annotations

from .coeffs import MPoly, PolyRing


class JetSeries:
    """c_0 + c_1 mu + ... + c_m mu^m with MPoly coefficients."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: PolyRing, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a jet needs at least the constant coefficient")
        for c in coeffs:
            if not isinstance(c, MPoly) or c.ring != ring:
                raise ValueError("jet coefficients must be polynomials of the jet's ring")
        self.ring = ring
        self.coeffs = coeffs

    @classmethod
    def constant(cls, f: MPoly, order: int) -> "JetSeries":
        z = f.ring.zero()
        return cls(f.ring, (f,) + (z,) * order)

    @classmethod
    def zero(cls, ring: PolyRing, order: int) -> "JetSeries":
        return cls(ring, (ring.zero(),) * (order + 1))

    @classmethod
    def one(cls, ring: PolyRing, order: int) -> "JetSeries":
        return cls.constant(ring.one(), order)

    @classmethod
    def mu(cls, ring: PolyRing, order: int) -> "JetSeries":
        c = [ring.zero()] * (order + 1)
        if order >= 1:
            c[1] = ring.one()
        return cls(ring, c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> MPoly:
        return self.coeffs[i]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def valuation(self):
        """Least i with c_i != 0, or None for the zero jet."""
        return next((i for i, c in enumerate(self.coeffs) if not c.is_zero()), None)

    def __eq__(self, other):
        return isinstance(other, JetSeries) and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def _match(self, other: "JetSeries"):
        if not isinstance(other, JetSeries):
            raise TypeError("expected a JetSeries")
        if other.ring != self.ring:
            raise ValueError("ring mismatch")
        if other.order != self.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        self._match(other)
        return JetSeries(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._match(other)
        return JetSeries(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return JetSeries(self.ring, [-a for a in self.coeffs])

    def scale(self, f: MPoly) -> "JetSeries":
        return JetSeries(self.ring, [f * a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, MPoly):
            return self.scale(other)
        return jet_mul(self, other)

    def __pow__(self, n: int) -> "JetSeries":
        result = JetSeries.one(self.ring, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, n: int) -> "JetSeries":
        if n > self.order:
            raise ValueError("cannot truncate to a larger order")
        return JetSeries(self.ring, self.coeffs[: n + 1])

    def pad(self, n: int) -> "JetSeries":
        if n < self.order:
            raise ValueError("cannot pad to a smaller order")
        return JetSeries(self.ring, self.coeffs + (self.ring.zero(),) * (n - self.order))

    def shift(self, k: int) -> "JetSeries":
        """Multiply by mu^k, keeping the order."""
        z = self.ring.zero()
        c = (z,) * k + self.coeffs
        return JetSeries(self.ring, c[: self.order + 1])

    def map_coeffs(self, fn, ring=None) -> "JetSeries":
        return JetSeries(ring or self.ring, [fn(c) for c in self.coeffs])

    def to_text(self, with_order=True) -> str:
        parts = []
        if not self.coeffs[0].is_zero() or all(c.is_zero() for c in self.coeffs[1:]):
            parts.append(str(self.coeffs[0]))
        for i, c in enumerate(self.coeffs[1:], start=1):
            if not c.is_zero():
                parts.append(f"({c})*mu^{i}")
        s = " + ".join(parts)
        return f"{s} @ order {self.order}" if with_order else s

    def __repr__(self):
        return f"JetSeries({self.to_text()})"

    def __str__(self):
        return self.to_text()


def jet_mul(f: JetSeries, g: JetSeries) -> JetSeries:
    """Truncated Cauchy product."""
    f._match(g)
    m = f.order
    a, b = f.coeffs, g.coeffs
    nz_a = [i for i in range(m + 1) if not a[i].is_zero()]
    nz_b = [j for j in range(m + 1) if not b[j].is_zero()]
    out = [f.ring.zero()] * (m + 1)
    for i in nz_a:
        for j in nz_b:
            if i + j > m:
                break
            out[i + j] = out[i + j] + a[i] * b[j]
    return JetSeries(f.ring, out)


class SubstitutionMap:
    """The A-algebra map A[mu]_m -> A[mu]_n with mu -> image (image_0 = 0)."""

    __slots__ = ("source", "image")

    def __init__(self, source_order: int, image: JetSeries):
        if not image.coeffs[0].is_zero():
            raise ValueError("a substitution map must send mu into (mu)")
        if source_order < 0:
            raise ValueError("negative order")
        v = image.valuation()
        if v is not None and v * (source_order + 1) <= image.order:
            # mu^(source+1) = 0 must map to zero
            raise ValueError(
                f"mu -> {image.to_text(False)} is not defined on order {source_order} jets"
            )
        self.source = source_order
        self.image = image

    @property
    def target(self) -> int:
        return self.image.order

    @property
    def ring(self) -> PolyRing:
        return self.image.ring

    @property
    def constant_coefficients(self) -> bool:
        """True iff every coefficient of the image is free of ring variables."""
        n = self.ring.n_ring
        return all(
            all(not any(m[:n]) for m in c.terms) for c in self.image.coeffs
        )

    def __eq__(self, other):
        return isinstance(other, SubstitutionMap) and self.source == other.source and self.image == other.image

    def __hash__(self):
        return hash((self.source, self.image))

    def __repr__(self):
        return f"SubstitutionMap({self.source} -> {self.target}: mu |-> {self.image.to_text(False)})"

    @classmethod
    def monomial(cls, ring: PolyRing, source: int, target: int, a: MPoly | None = None, k: int = 1):
        """mu -> a * mu^k."""
        c = [ring.zero()] * (target + 1)
        if k <= target:
            c[k] = ring.one() if a is None else a
        return cls(source, JetSeries(ring, c))

    @classmethod
    def scaling(cls, ring, order: int, a: MPoly):
        return cls.monomial(ring, order, order, a, 1)

    @classmethod
    def projection(cls, ring, source: int, target: int):
        return cls.monomial(ring, source, target, None, 1)

    @classmethod
    def stretching(cls, ring, source: int, n: int):
        return cls.monomial(ring, source, source * n, None, n)


def apply_subst(psi: SubstitutionMap, f: JetSeries) -> JetSeries:
    """sum_i f_i psi(mu)^i, truncated at the target order."""
    if f.order != psi.source:
        raise ValueError(f"jet order {f.order} does not match source order {psi.source}")
    if f.ring != psi.ring:
        raise ValueError("ring mismatch")
    n = psi.target
    ring = f.ring
    out = [ring.zero()] * (n + 1)
    out[0] = f.coeffs[0]
    s = psi.image
    v = s.valuation()
    if v is None:
        return JetSeries(ring, out)
    power = JetSeries.one(ring, n)
    for i in range(1, f.order + 1):
        if i * v > n:
            break
        power = power * s
        c = f.coeffs[i]
        if c.is_zero():
            continue
        for k in range(i * v, n + 1):
            pk = power.coeffs[k]
            if not pk.is_zero():
                out[k] = out[k] + c * pk
    return JetSeries(ring, out)


def compose_subst(psi: SubstitutionMap, phi: SubstitutionMap) -> SubstitutionMap:
    """psi o phi: mu -> psi(phi(mu))."""
    if phi.target != psi.source:
        raise ValueError(f"order mismatch: {phi.target} vs {psi.source}")
    return SubstitutionMap(phi.source, apply_subst(psi, phi.image))
