"""Hasse-Schmidt derivations of a polynomial ring, stored by generator images.

An HS-derivation D of length m is the ring map phi_D: R -> R[mu]_m with
phi_D(x_j) = x_j + D_1(x_j) mu + ... + D_m(x_j) mu^m. Extension variables of
the ring (if any) are fixed by phi_D.
"""
from __future__ import annotations

from functools import total_ordering

from .coeffs import MPoly, PolyRing
from .jets import JetSeries, SubstitutionMap, apply_subst


@total_ordering
class _Infinity:
    """Order of the identity: larger than every integer, not a number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("hs-infinity")

    def __repr__(self):
        return "INF"


INF = _Infinity()


class HSDerivation:
    __slots__ = ("ring", "length", "images")

    def __init__(self, ring: PolyRing, length: int, images):
        images = tuple(images)
        if length < 1:
            raise ValueError("length must be >= 1")
        if len(images) != ring.n_ring:
            raise ValueError(f"need {ring.n_ring} images, got {len(images)}")
        for j, jet in enumerate(images):
            if not isinstance(jet, JetSeries) or jet.ring != ring:
                raise ValueError(f"image of {ring.ring_vars[j]} is not a jet over {ring}")
            if jet.order != length:
                raise ValueError(
                    f"image of {ring.ring_vars[j]} has order {jet.order}, expected {length}"
                )
            if jet.coeffs[0] != ring.gen(j):
                raise ValueError(
                    f"constant term of the image of {ring.ring_vars[j]} is "
                    f"{jet.coeffs[0]}, expected {ring.ring_vars[j]}"
                )
        self.ring = ring
        self.length = length
        self.images = images

    # -- constructors -------------------------------------------------
    @classmethod
    def identity(cls, ring: PolyRing, length: int) -> "HSDerivation":
        return cls(ring, length, [JetSeries.constant(g, length) for g in ring.ring_gens()])

    @classmethod
    def from_components(cls, ring: PolyRing, length: int, comps) -> "HSDerivation":
        """comps[j] = [D_1(x_j), ..., D_length(x_j)] (missing entries are zero)."""
        imgs = []
        for j, g in enumerate(ring.ring_gens()):
            c = list(comps[j]) + [ring.zero()] * (length - len(comps[j]))
            imgs.append(JetSeries(ring, [g] + [ring.zero() if v is None else v for v in c[:length]]))
        return cls(ring, length, imgs)

    @classmethod
    def derivation(cls, ring: PolyRing, values) -> "HSDerivation":
        """(Id, delta) with delta(x_j) = values[j]."""
        return cls.from_components(ring, 1, [[v] for v in values])

    # -- access ---------------------------------------------------------
    def component(self, i: int):
        """[D_i(x_j) for each j]."""
        return [jet.coeffs[i] for jet in self.images]

    def derivation_part(self) -> "HSDerivation":
        return truncate(self, 1)

    def is_identity(self) -> bool:
        return all(c.is_zero() for jet in self.images for c in jet.coeffs[1:])

    def __eq__(self, other):
        return (
            isinstance(other, HSDerivation)
            and self.ring == other.ring
            and self.length == other.length
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.ring, self.length, self.images))

    def __repr__(self):
        lines = ", ".join(
            f"{v} -> {jet.to_text(False)}" for v, jet in zip(self.ring.ring_vars, self.images)
        )
        return f"HSDerivation(len={self.length}: {lines})"

    def apply(self, i: int, f: MPoly) -> MPoly:
        """D_i(f)."""
        return eval_phi(self, f).coeffs[i]


def from_images(ring: PolyRing, m: int, images) -> HSDerivation:
    return HSDerivation(ring, m, images)


def eval_phi(D: HSDerivation, f: MPoly, order: int | None = None) -> JetSeries:
    """phi_D(f), optionally truncated at a smaller order for speed."""
    if f.ring != D.ring:
        raise ValueError(f"ring mismatch: {f.ring} vs {D.ring}")
    m = D.length if order is None else order
    ring = D.ring
    nr = ring.n_ring
    jets = [jet if m == D.length else jet.truncate(m) for jet in D.images]
    powers = [[JetSeries.one(ring, m), jets[j]] for j in range(nr)]

    def power(j, k):
        pj = powers[j]
        while len(pj) <= k:
            pj.append(pj[-1] * jets[j])
        return pj[k]

    # group terms by their ring-variable part so each jet product is built once
    groups = {}
    for mono, c in f.terms.items():
        groups.setdefault(mono[:nr], []).append((mono, c))
    out = [ring.zero()] * (m + 1)
    zero_ring = (0,) * nr
    for key, terms in groups.items():
        cof = MPoly(ring, {zero_ring + mono[nr:]: c for mono, c in terms}, _clean=True)
        jet = None
        for j, k in enumerate(key):
            if k:
                pw = power(j, k)
                jet = pw if jet is None else jet * pw
        if jet is None:
            out[0] = out[0] + cof
            continue
        for i, cj in enumerate(jet.coeffs):
            if not cj.is_zero():
                out[i] = out[i] + cof * cj
    return JetSeries(ring, out)


def _check_pair(D: HSDerivation, E: HSDerivation):
    if D.ring != E.ring:
        raise ValueError("ring mismatch")
    if D.length != E.length:
        raise ValueError(f"length mismatch: {D.length} vs {E.length}")


def apply_tilde(D: HSDerivation, jet: JetSeries) -> JetSeries:
    """The mu-linear extension of phi_D to R[mu]_m, truncated."""
    m = D.length
    out = JetSeries.zero(D.ring, m)
    for i, c in enumerate(jet.coeffs):
        if c.is_zero():
            continue
        if i == 0:
            out = out + eval_phi(D, c)
        else:
            out = out + eval_phi(D, c, m - i).pad(m).shift(i)
    return out


def compose(D: HSDerivation, E: HSDerivation) -> HSDerivation:
    """D o E, with phi_{DoE} = phi~_D o phi_E."""
    _check_pair(D, E)
    return HSDerivation(D.ring, D.length, [apply_tilde(D, img) for img in E.images])


def compose_all(ders, ring: PolyRing | None = None, length: int | None = None) -> HSDerivation:
    ders = list(ders)
    if not ders:
        return HSDerivation.identity(ring, length)
    out = ders[0]
    for d in ders[1:]:
        out = compose(out, d)
    return out


def invert(D: HSDerivation) -> HSDerivation:
    """D* with D o D* = identity, solved order by order on generator images:
    D*_n(x_j) = -sum_{a=1}^{n} D_a(D*_{n-a}(x_j))."""
    m = D.length
    ring = D.ring
    imgs = []
    for j, g in enumerate(ring.ring_gens()):
        star = [g]
        phis = [eval_phi(D, g)]
        for n in range(1, m + 1):
            acc = ring.zero()
            for a in range(1, n + 1):
                acc = acc + phis[n - a].coeffs[a]
            star.append(-acc)
            if n < m:
                phis.append(eval_phi(D, star[n]) if not star[n].is_zero() else JetSeries.zero(ring, m))
        imgs.append(JetSeries(ring, star))
    return HSDerivation(ring, m, imgs)


def order(D: HSDerivation):
    """l(D): least h >= 1 with D_h != 0, or INF for the identity."""
    best = INF
    for jet in D.images:
        for i, c in enumerate(jet.coeffs[1:], start=1):
            if not c.is_zero():
                if best is INF or i < best:
                    best = i
                break
    return best


def subst_action(psi: SubstitutionMap, D: HSDerivation) -> HSDerivation:
    """psi . D, with phi_{psi.D} = psi o phi_D."""
    if psi.source != D.length:
        raise ValueError(f"substitution source order {psi.source} != length {D.length}")
    if psi.ring != D.ring:
        raise ValueError("ring mismatch")
    return HSDerivation(D.ring, psi.target, [apply_subst(psi, img) for img in D.images])


def scale(a, D: HSDerivation) -> HSDerivation:
    """a . D = (a^i D_i)."""
    if not isinstance(a, MPoly):
        a = D.ring.const(a)
    return subst_action(SubstitutionMap.scaling(D.ring, D.length, a), D)


def truncate(D: HSDerivation, n: int) -> HSDerivation:
    if not 1 <= n <= D.length:
        raise ValueError(f"cannot truncate length {D.length} to {n}")
    return HSDerivation(D.ring, n, [img.truncate(n) for img in D.images])


def stretch(D: HSDerivation, n: int) -> HSDerivation:
    """D[n]: D_{i/n} in position i when n | i, zero elsewhere."""
    if n < 1:
        raise ValueError("stretch factor must be >= 1")
    ring = D.ring
    z = ring.zero()
    imgs = []
    for img in D.images:
        c = [z] * (D.length * n + 1)
        for i, v in enumerate(img.coeffs):
            c[i * n] = v
        imgs.append(JetSeries(ring, c))
    return HSDerivation(ring, D.length * n, imgs)


def pad(D: HSDerivation, n: int) -> HSDerivation:
    """Append zero components up to length n (n >= length)."""
    if n < D.length:
        raise ValueError("cannot pad to a smaller length")
    return HSDerivation(D.ring, n, [img.pad(n) for img in D.images])


def residual_derivation(D: HSDerivation, E: HSDerivation) -> HSDerivation:
    """delta with D = E o (Id, delta)[m] when D and E agree below the top.

    The top component of E o (Id,delta)[m] is E_m + delta, so delta is the
    difference of the top coefficients; the recomposition is re-checked.
    """
    _check_pair(D, E)
    m = D.length
    if m > 1 and truncate(D, m - 1) != truncate(E, m - 1):
        raise ValueError("derivations differ below the top component")
    vals = [a.coeffs[m] - b.coeffs[m] for a, b in zip(D.images, E.images)]
    delta = HSDerivation.derivation(D.ring, vals)
    if compose(E, stretch(delta, m)) != D:
        raise AssertionError("residual recomposition failed")
    return delta


def map_ring(D: HSDerivation, ring: PolyRing, fn) -> HSDerivation:
    """Re-express every image coefficient via fn: MPoly -> MPoly over ``ring``."""
    return HSDerivation(ring, D.length, [img.map_coeffs(fn, ring) for img in D.images])
