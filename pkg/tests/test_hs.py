import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import identities as ids
from hsder.coeffs import PolyRing, make_field
from hsder.hs import (
    INF,
    HSDerivation,
    compose,
    eval_phi,
    invert,
    order,
    pad,
    residual_derivation,
    scale,
    stretch,
    truncate,
)
from hsder.jets import JetSeries
from hsder.sampling import random_hs, random_poly
from oracle import Oracle

F2x = PolyRing(make_field(2), ("x",))
F2xy = PolyRing(make_field(2), ("x", "y"))
F5xy = PolyRing(make_field(5), ("x", "y"))


def hs(R, m, **images):
    """Build from {var: [D_1(var), ..., D_m(var)]} given as ints or polys."""
    comps = []
    for v in R.ring_vars:
        row = images.get(v, [])
        comps.append([R.const(c) if isinstance(c, int) else c for c in row])
    return HSDerivation.from_components(R, m, comps)


# -- construction -----------------------------------------------------------

def test_translation_jet_is_valid():
    D = hs(F2x, 2, x=[1])
    assert D.component(1) == [F2x.one()]


def test_wrong_constant_term_rejected():
    x = F2x.gen("x")
    with pytest.raises(ValueError):
        HSDerivation(F2x, 1, [JetSeries(F2x, [x**2, F2x.one()])])


def test_euler_derivation_on_monomials():
    x, y = F5xy.gens()
    D = hs(F5xy, 1, x=[x])
    assert D.apply(1, x**3 * y) == 3 * (x**3 * y)
    assert D.apply(1, y) == F5xy.zero()


# -- eval_phi ---------------------------------------------------------------

def test_translation_fixes_sum_of_squares():
    x, y = F2xy.gens()
    D = hs(F2xy, 4, x=[1], y=[1])
    assert eval_phi(D, x**2 + y**2) == JetSeries.constant(x**2 + y**2, 4)


def test_translation_on_product():
    x, y = F2xy.gens()
    D = hs(F2xy, 4, x=[1], y=[1])
    z = F2xy.zero()
    assert eval_phi(D, x * y) == JetSeries(F2xy, [x * y, x + y, F2xy.one(), z, z])


def test_translation_on_square():
    x, _ = F2xy.gens()
    D = hs(F2xy, 4, x=[1], y=[1])
    z = F2xy.zero()
    assert eval_phi(D, x**2) == JetSeries(F2xy, [x**2, z, F2xy.one(), z, z])


@given(st.integers(0, 2**32), st.integers(1, 4))
def test_eval_phi_matches_leibniz_operators(seed, m):
    rng = random.Random(seed)
    D = random_hs(F5xy, m, 2, rng)
    f = random_poly(F5xy, 3, rng)
    o = Oracle(F5xy)
    assert [o.poly(c) for c in eval_phi(D, f).coeffs] == o.phi(o.images(D), f, m)


# -- compose / invert -----------------------------------------------------------

def test_length_one_composition_adds():
    x, y = F5xy.gens()
    D, E = hs(F5xy, 1, x=[x * y]), hs(F5xy, 1, x=[y], y=[x])
    assert compose(D, E) == hs(F5xy, 1, x=[x * y + y], y=[x])


def test_translation_composed_with_square_translation():
    D, E = hs(F2x, 2, x=[1]), hs(F2x, 2, x=[0, 1])
    assert compose(D, E) == hs(F2x, 2, x=[1, 1])


@given(st.integers(0, 2**32))
def test_identity_is_neutral(seed):
    D = random_hs(F5xy, 3, 2, random.Random(seed))
    I = HSDerivation.identity(F5xy, 3)
    assert compose(D, I) == D == compose(I, D)


@given(st.integers(0, 2**32), st.integers(1, 4), st.sampled_from([2, 3, 5]))
def test_compose_matches_operator_product(seed, m, p):
    rng = random.Random(seed)
    R = PolyRing(make_field(p), ("x", "y"))
    D, E = random_hs(R, m, 2, rng), random_hs(R, m, 2, rng)
    o = Oracle(R)
    expect = o.compose(o.images(D), o.images(E), m)
    assert o.images(compose(D, E)) == expect


def test_translation_is_self_inverse_in_char_two():
    D = hs(F2x, 2, x=[1])
    assert invert(D) == D


def test_translation_inverse_in_char_five():
    R = PolyRing(make_field(5), ("x",))
    assert invert(hs(R, 2, x=[1])) == hs(R, 2, x=[4])


def test_identity_inverse():
    I = HSDerivation.identity(F5xy, 4)
    assert invert(I) == I


@given(st.integers(0, 2**32), st.integers(1, 4))
def test_inverse_matches_operator_recursion(seed, m):
    rng = random.Random(seed)
    D = random_hs(F5xy, m, 2, rng)
    o = Oracle(F5xy)
    assert o.images(invert(D)) == o.inverse(o.images(D), m)


# -- order ----------------------------------------------------------------------

def test_order_examples():
    x, _ = F5xy.gens()
    assert order(hs(F5xy, 3, y=[0, 1])) == 2
    assert order(HSDerivation.identity(F5xy, 3)) is INF
    assert order(hs(F5xy, 3, x=[x])) == 1


def test_infinite_order_is_not_a_number():
    assert INF > 10**9 and not INF < 5 and INF == INF


# -- truncate / stretch / scale ---------------------------------------------------

def test_truncate_example():
    assert truncate(hs(F2x, 2, x=[1, 1]), 1) == hs(F2x, 1, x=[1])


def test_stretch_example():
    assert stretch(hs(F2x, 1, x=[1]), 2) == hs(F2x, 2, x=[0, 1])


def test_scale_by_parameter():
    R = PolyRing(make_field(2, ("t",)), ("x",))
    t = R.const(R.field.param("t"))
    assert scale(t, hs(R, 2, x=[1, 1])) == hs(R, 2, x=[t, t**2])


def test_pad_then_truncate_round_trip():
    D = random_hs(F5xy, 2, 2, random.Random(3))
    assert truncate(pad(D, 5), 2) == D


# -- residual -------------------------------------------------------------------

def test_residual_at_top():
    D, E = hs(F2x, 3, x=[1, 0, 1]), hs(F2x, 3, x=[1])
    assert residual_derivation(D, E) == hs(F2x, 1, x=[1])


def test_residual_of_equal_derivations_is_zero():
    D = random_hs(F5xy, 3, 2, random.Random(5))
    assert residual_derivation(D, D).is_identity()


def test_residual_from_identity():
    D, E = hs(F2x, 2, x=[0, 1]), HSDerivation.identity(F2x, 2)
    assert residual_derivation(D, E) == hs(F2x, 1, x=[1])


def test_residual_rejects_lower_disagreement():
    with pytest.raises(ValueError):
        residual_derivation(hs(F2x, 2, x=[1]), HSDerivation.identity(F2x, 2))


# -- identities ---------------------------------------------------------------------

seeds = st.integers(0, 2**32)
lengths = st.integers(1, 4)


def triple(seed, m):
    rng = random.Random(seed)
    return rng, [random_hs(F5xy, m, 2, rng, rng.randint(1, m)) for _ in range(3)]


@given(seeds, lengths)
def test_group_axioms(seed, m):
    _, (D, E, F) = triple(seed, m)
    ids.check_group_axioms(D, E, F)


@given(seeds, lengths)
def test_order_inequality_and_top_additivity(seed, m):
    _, (D, E, _) = triple(seed, m)
    ids.check_order_and_top_additivity(D, E)


@given(seeds, lengths)
def test_constant_coefficient_distributivity(seed, m):
    rng, (D, E, _) = triple(seed, m)
    ids.check_constant_distributivity(D, E, rng)


@given(seeds, lengths)
def test_substitution_actions_compose(seed, m):
    rng, (D, _, _) = triple(seed, m)
    ids.check_substitution_composition(D, rng)


@given(seeds, lengths)
def test_truncation_stretch_scale_relations(seed, m):
    rng, (D, E, _) = triple(seed, m)
    ids.check_truncation_stretch_scale(D, E, rng)


@given(seeds, lengths)
def test_inverse_commutes_with_constant_substitution(seed, m):
    rng, (D, _, _) = triple(seed, m)
    ids.check_inverse_of_substitution(D, rng)


@given(seeds, lengths)
def test_stretched_derivation_is_central(seed, m):
    rng, (D, _, _) = triple(seed, m)
    ids.check_stretched_derivation_is_central(D, rng)


@given(seeds, lengths)
def test_order_is_read_off_generators(seed, m):
    _, (D, _, _) = triple(seed, m)
    ids.check_order_from_generators(D)
