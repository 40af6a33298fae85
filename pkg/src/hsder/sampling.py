"""Random polynomials and HS-derivations for property tests and experiments."""
from __future__ import annotations

import random

from itertools import product

from .coeffs import MPoly, PolyRing, gauss_solve
from .hs import HSDerivation, compose
from .jets import JetSeries
from .integrate import stage_system, stage_values
from .logideal import IdealPresentation


def random_coeff(K, rng: random.Random, param_degree: int = 1):
    if K.is_prime:
        return rng.randrange(K.p)
    num = random_param_poly(K, rng, param_degree)
    if rng.random() < 0.2:
        den = random_param_poly(K, rng, 1)
        if not den.is_zero():
            return K.fraction(num, den)
    return K(num)


def random_param_poly(K, rng, degree):
    pring = K.pring
    terms = {m: rng.randrange(K.p) for m in pring.monomials_up_to(degree) if rng.random() < 0.5}
    return MPoly(pring, terms)


def random_poly(ring: PolyRing, degree: int, rng: random.Random, density: float = 0.4,
                param_degree: int = 1, ring_only: bool = False) -> MPoly:
    K = ring.field
    idx = range(ring.n_ring) if ring_only else None
    terms = {}
    for m in ring.monomials_up_to(degree, idx):
        if rng.random() < density:
            terms[m] = random_coeff(K, rng, param_degree)
    return MPoly(ring, terms)


def random_hs(ring: PolyRing, m: int, degree: int, rng: random.Random, min_order: int = 1,
              density: float = 0.4) -> HSDerivation:
    comps = []
    for _ in range(ring.n_ring):
        comps.append([
            random_poly(ring, degree, rng, density) if i >= min_order else ring.zero()
            for i in range(1, m + 1)
        ])
    return HSDerivation.from_components(ring, m, comps)


def random_derivation(ring: PolyRing, degree: int, rng: random.Random, density: float = 0.4) -> HSDerivation:
    return random_hs(ring, 1, degree, rng, 1, density)


def _random_solution(sol, K, rng):
    vec = list(sol.particular)
    for kv in sol.kernel:
        a = K(rng.randrange(K.p))
        if K.is_zero(a):
            continue
        vec = [K.add(v, K.mul(a, w)) for v, w in zip(vec, kv)]
    return vec


def _components(D: HSDerivation) -> list:
    return [list(jet.coeffs[1:]) for jet in D.images]


def _proportional(v, w) -> bool:
    return all(a * d == b * c for a, b in zip(v, w) for c, d in zip(v, w))


def grading_weights(I: IdealPresentation, bound: int = 4) -> list:
    """Pairwise non-proportional weight vectors (entries <= bound) making
    every generator of I weighted homogeneous, at most one per variable."""
    n = I.ring.n_ring
    out = []
    for w in product(range(bound + 1), repeat=n):
        if not any(w) or any(_proportional(v, w) for v in out):
            continue
        if all(len({sum(a * b for a, b in zip(w, mono)) for mono in g.terms}) <= 1 for g in I.gens):
            out.append(w)
    return out[:n]


def _random_jet(ring, m, rng, degree, min_order):
    coeffs = [ring.one()] + [
        random_poly(ring, degree, rng, 0.3) if i >= min_order else ring.zero() for i in range(1, m + 1)
    ]
    return JetSeries(ring, coeffs)


def random_torus_hs(I: IdealPresentation, m: int, rng: random.Random, degree: int = 1,
                    min_order: int = 1) -> HSDerivation:
    """x_j -> x_j * u^{w_j} for a grading w of I and a random unit u = 1 + O(mu).

    Every generator g of weighted degree d goes to u^d g, so the result is
    fully I-logarithmic.
    """
    ring = I.ring
    D = HSDerivation.identity(ring, m)
    for w in grading_weights(I):
        u = _random_jet(ring, m, rng, degree, min_order)
        imgs = [JetSeries.constant(g, m) * u**wj for g, wj in zip(ring.ring_gens(), w)]
        D = compose(D, HSDerivation(ring, m, imgs))
    return D


def random_ideal_shift_hs(I: IdealPresentation, m: int, rng: random.Random, degree: int = 1,
                          min_order: int = 1) -> HSDerivation:
    """x_j -> x_j + sum_i g_i a_ij(mu) with g_i the generators of I.

    g(x + e) - g(x) lies in the ideal generated by e, so this is fully
    I-logarithmic.
    """
    ring = I.ring
    comps = []
    for _ in range(ring.n_ring):
        row = []
        for i in range(1, m + 1):
            v = ring.zero()
            if i >= min_order:
                for g in I.gens:
                    if rng.random() < 0.5:
                        v = v + g * random_poly(ring, degree, rng, 0.3)
            row.append(v)
        comps.append(row)
    return HSDerivation.from_components(ring, m, comps)


def random_full_log_hs(I: IdealPresentation, m: int, rng: random.Random, degree: int = 1,
                       min_order: int = 1) -> HSDerivation:
    """A composite of torus and ideal-shift HS-derivations (fully I-log)."""
    parts = [random_torus_hs(I, m, rng, degree, min_order), random_ideal_shift_hs(I, m, rng, degree, min_order)]
    rng.shuffle(parts)
    return compose(*parts)


def random_log_hs(I: IdealPresentation, m: int, r: int, rng: random.Random, degree: int = 3,
                  min_order: int = 1, tries: int = 8, free_degree: int | None = None) -> HSDerivation:
    """A random r-I-logarithmic HS-derivation of length m with l(D) >= min_order.

    Stages min_order..r are drawn from the degree-bounded solution space of
    the stage condition; an infeasible stage restarts the draw. Stages
    above r are arbitrary polynomials of degree ``free_degree``. When every
    draw hits an obstructed stage, the logarithmic part comes from
    random_full_log_hs instead.
    """
    ring = I.ring
    K = ring.field
    free_degree = degree if free_degree is None else free_degree
    top = min(r, m)
    D = None
    for _ in range(tries):
        D = HSDerivation.identity(ring, m)
        for k in range(min_order, top + 1):
            system = stage_system(D, I, k, degree)
            sol = gauss_solve(system)
            if not sol.feasible:
                D = None
                break
            comps = _components(D)
            for j, v in stage_values(ring, system.labels, _random_solution(sol, K, rng)).items():
                comps[j][k - 1] = v
            D = HSDerivation.from_components(ring, m, comps)
        if D is not None:
            break
    if D is None:
        D = random_full_log_hs(I, m, rng, max(1, degree - 2), min_order)
    comps = _components(D)
    for j in range(ring.n_ring):
        for i in range(max(r + 1, min_order), m + 1):
            comps[j][i - 1] = random_poly(ring, free_degree, rng)
    return HSDerivation.from_components(ring, m, comps)


def standard_ideals(p: int):
    """The ideals <xy> and <y^2 + x^3> over F_p[x, y]."""
    from .coeffs import PrimeField

    R = PolyRing(PrimeField(p), ("x", "y"))
    x, y = R.gens()
    return R, [IdealPresentation(R, [x * y]), IdealPresentation(R, [y**2 + x**3])]


__all__ = [
    "random_coeff",
    "grading_weights",
    "random_derivation",
    "random_full_log_hs",
    "random_ideal_shift_hs",
    "random_hs",
    "random_log_hs",
    "random_poly",
    "random_torus_hs",
    "standard_ideals",
]
