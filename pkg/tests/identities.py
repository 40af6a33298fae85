"""Group and substitution identities for HS-derivations, shared by the
property tests and the acceptance run. Each check returns None or raises
AssertionError with the name of the broken identity."""
from __future__ import annotations

import random

from hsder.hs import (
    INF,
    HSDerivation,
    compose,
    eval_phi,
    invert,
    order,
    scale,
    stretch,
    subst_action,
    truncate,
)
from hsder.jets import JetSeries, SubstitutionMap, compose_subst
from hsder.sampling import random_derivation, random_hs, random_poly


def random_constant_subst(R, source, target, rng):
    v = target // (source + 1) + 1
    c = [R.zero()] * (target + 1)
    for i in range(v, target + 1):
        c[i] = R.const(rng.randrange(R.p))
    if v <= target and c[v].is_zero():
        c[v] = R.one()
    return SubstitutionMap(source, JetSeries(R, c))


def random_subst(R, source, target, rng, degree=1):
    v = target // (source + 1) + 1
    c = [R.zero()] * (target + 1)
    for i in range(v, target + 1):
        c[i] = random_poly(R, degree, rng, 0.5)
    if v <= target and c[v].is_zero():
        c[v] = R.one()
    return SubstitutionMap(source, JetSeries(R, c))


def monomials(R, degree=6):
    return [R.monomial(e) for e in R.monomials_up_to(degree)]


def _min(a, b):
    if a is INF:
        return b
    if b is INF:
        return a
    return min(a, b)


def check_group_axioms(D, E, F):
    I = HSDerivation.identity(D.ring, D.length)
    assert compose(compose(D, E), F) == compose(D, compose(E, F)), "associativity"
    assert compose(D, I) == D and compose(I, D) == D, "identity"
    Ds = invert(D)
    assert compose(D, Ds) == I and compose(Ds, D) == I, "inverse"


def check_order_and_top_additivity(D, E):
    DE = compose(D, E)
    lo = _min(order(D), order(E))
    ell = order(DE)
    if lo is INF:
        assert ell is INF, "order inequality"
    else:
        assert ell is INF or ell >= lo, "order inequality"
    if lo is INF or lo > D.length:
        return
    for f in monomials(D.ring):
        a = eval_phi(DE, f).coeffs[lo]
        b = eval_phi(D, f).coeffs[lo] + eval_phi(E, f).coeffs[lo]
        assert a == b, "top-component additivity"


def check_constant_distributivity(D, E, rng, target=None):
    R, m = D.ring, D.length
    target = target or m + rng.randint(0, 2)
    phi = random_constant_subst(R, m, target, rng)
    lhs = subst_action(phi, compose(D, E))
    rhs = compose(subst_action(phi, D), subst_action(phi, E))
    assert lhs == rhs, "constant-coefficient distributivity"


def check_substitution_composition(D, rng):
    R, m = D.ring, D.length
    n1 = m + rng.randint(0, 2)
    n2 = n1 + rng.randint(0, 2)
    phi = random_subst(R, m, n1, rng)
    psi = random_subst(R, n1, n2, rng)
    assert subst_action(psi, subst_action(phi, D)) == subst_action(compose_subst(psi, phi), D), \
        "substitution composition"


def check_truncation_stretch_scale(D, E, rng):
    R, m = D.ring, D.length
    q = rng.randint(1, m)
    n = rng.randint(1, 3)
    n2 = rng.randint(1, 2)
    a = R.const(rng.randrange(R.p))
    assert truncate(compose(D, E), q) == compose(truncate(D, q), truncate(E, q)), "truncation of products"
    assert stretch(compose(D, E), n) == compose(stretch(D, n), stretch(E, n)), "stretch of products"
    assert stretch(D, n * n2) == stretch(stretch(D, n), n2), "iterated stretch"
    assert scale(a, compose(D, E)) == compose(scale(a, D), scale(a, E)), "scale of products"
    assert stretch(scale(a**n, D), n) == scale(a, stretch(D, n)), "scale and stretch"
    assert truncate(stretch(D, n), q * n) == stretch(truncate(D, q), n), "truncate and stretch"
    assert truncate(scale(a, D), q) == scale(a, truncate(D, q)), "truncate and scale"


def check_inverse_of_substitution(D, rng):
    R, m = D.ring, D.length
    psi = random_constant_subst(R, m, m + rng.randint(0, 2), rng)
    assert invert(subst_action(psi, D)) == subst_action(psi, invert(D)), "inverse commutes with substitution"


def check_stretched_derivation_is_central(D, rng, degree=2):
    R, m = D.ring, D.length
    delta = stretch(random_derivation(R, degree, rng), m)
    assert compose(D, delta) == compose(delta, D), "centrality of (Id, delta)[m]"


def check_order_from_generators(D):
    ell = order(D)
    by_monomials = INF
    for f in monomials(D.ring):
        jet = eval_phi(D, f)
        for i in range(1, D.length + 1):
            if not jet.coeffs[i].is_zero():
                by_monomials = i if by_monomials is INF else min(by_monomials, i)
                break
    assert ell == by_monomials, "order from generators"


def check_all(R, m, degree, rng):
    """Every identity on one random triple; returns the number of checks."""
    D, E, F = (random_hs(R, m, degree, rng, rng.randint(1, m)) for _ in range(3))
    check_group_axioms(D, E, F)
    check_order_and_top_additivity(D, E)
    check_constant_distributivity(D, E, rng)
    check_substitution_composition(D, rng)
    check_truncation_stretch_scale(D, E, rng)
    check_inverse_of_substitution(D, rng)
    check_stretched_derivation_is_central(D, rng)
    check_order_from_generators(D)
    return 8


def run_suite(R, cases: int, seed: int, max_length: int = 5, degree: int = 3) -> int:
    rng = random.Random(seed)
    for _ in range(cases):
        check_all(R, rng.randint(1, max_length), degree, rng)
    return cases
