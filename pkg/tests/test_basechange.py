import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsder.basechange import (
    BaseExtension,
    CounterexampleInstance,
    IncompatibleExtensionError,
    basis_decompose_derivation,
    counterexample_report,
    counterexample_witness_family,
    extend_hs,
    k_side,
    leap_scan,
    recombine,
)
from hsder.coeffs import PolyRing, make_field
from hsder.hs import HSDerivation, compose, invert
from hsder.hs import subst_action
from hsder.jets import JetSeries, SubstitutionMap
from hsder.integrate import find_log_integral, verify_integral_witness
from hsder.logideal import IdealPresentation, is_r_log, pushforward_hs
from hsder.sampling import random_derivation, random_full_log_hs, random_hs
from identities import random_subst

F2 = make_field(2)
F3 = make_field(3)


def poly_ext(field, names=("x", "y"), new=("t",)):
    R = PolyRing(field, names)
    return R, BaseExtension.polynomial(R, new)


def test_extend_translation():
    R, ext = poly_ext(F2, ("x",))
    D = HSDerivation.from_components(R, 1, [[R.one()]])
    E = extend_hs(D, ext)
    assert E.ring == ext.target
    assert E == HSDerivation.from_components(ext.target, 1, [[ext.target.one()]])


def test_extend_rejects_foreign_ring():
    R, ext = poly_ext(F2)
    other = PolyRing(F3, ("x", "y"))
    with pytest.raises(IncompatibleExtensionError):
        extend_hs(HSDerivation.identity(other, 2), ext)


def test_twist_needs_every_parameter():
    R = PolyRing(make_field(2, ("s", "t")), ("x",))
    with pytest.raises(IncompatibleExtensionError):
        BaseExtension.frobenius_twist(R, {"s": "a"})


def test_twist_embeds_parameters_as_powers():
    inst = CounterexampleInstance.build()
    assert inst.twist.embed_poly(inst.h) == inst.H**2


@settings(max_examples=25)
@given(st.integers(0, 2**32), st.integers(1, 4))
def test_extension_is_a_homomorphism(seed, m):
    rng = random.Random(seed)
    R, ext = poly_ext(F3)
    D, E = random_hs(R, m, 2, rng), random_hs(R, m, 2, rng)
    assert extend_hs(compose(D, E), ext) == compose(extend_hs(D, ext), extend_hs(E, ext))
    assert extend_hs(invert(D), ext) == invert(extend_hs(D, ext))


@settings(max_examples=15)
@given(st.integers(0, 2**32), st.integers(1, 4))
def test_extension_commutes_with_substitution(seed, m):
    rng = random.Random(seed)
    R, ext = poly_ext(F3)
    D = random_hs(R, m, 2, rng)
    psi = random_subst(R, m, rng.randint(1, m + 2), rng)
    image = JetSeries(ext.target, [ext.embed_poly(c) for c in psi.image.coeffs])
    psi_l = SubstitutionMap(psi.source, image)
    assert extend_hs(subst_action(psi, D), ext) == subst_action(psi_l, extend_hs(D, ext))


@settings(max_examples=15)
@given(st.integers(0, 2**32))
def test_extension_commutes_with_pushforward(seed):
    rng = random.Random(seed)
    R, ext = poly_ext(F3)
    x, y = R.gens()
    I = IdealPresentation(R, [y**2 - x**3])
    D = random_full_log_hs(I, 3, rng)
    Ie = ext.embed_ideal(I)
    De = extend_hs(D, ext)
    assert is_r_log(De, Ie)
    assert pushforward_hs(De, Ie) == type(pushforward_hs(De, Ie))(Ie, extend_hs(pushforward_hs(D, I).rep, ext))


@settings(max_examples=10)
@given(st.integers(0, 2**32))
def test_integrality_transports(seed):
    rng = random.Random(seed)
    R, ext = poly_ext(F2)
    x, y = R.gens()
    I = IdealPresentation(R, [x * y])
    D = random_full_log_hs(I, 3, rng)
    delta = D.derivation_part()
    assert verify_integral_witness(D, delta, I)
    assert verify_integral_witness(extend_hs(D, ext), extend_hs(delta, ext), ext.embed_ideal(I))


# -- basis decomposition --------------------------------------------------------

def test_basis_decompose_scaled_partial():
    R, ext = poly_ext(F2, ("x",))
    t = ext.target.gen("t")
    parts = basis_decompose_derivation(HSDerivation.derivation(ext.target, [t]), ext)
    assert parts == [((1,), HSDerivation.derivation(R, [R.one()]))]


def test_basis_decompose_two_basis_elements():
    R, ext = poly_ext(F2)
    t = ext.target.gen("t")
    eps = HSDerivation.derivation(ext.target, [ext.target.zero(), 1 + t**2])
    dy = HSDerivation.derivation(R, [R.zero(), R.one()])
    assert basis_decompose_derivation(eps, ext) == [((0,), dy), ((2,), dy)]


def test_basis_decompose_zero():
    R, ext = poly_ext(F2)
    assert basis_decompose_derivation(HSDerivation.identity(ext.target, 1), ext) == []


@settings(max_examples=25)
@given(st.integers(0, 2**32))
def test_basis_decomposition_round_trips(seed):
    rng = random.Random(seed)
    R, ext = poly_ext(F3)
    eps = random_derivation(ext.target, 3, rng)
    parts = basis_decompose_derivation(eps, ext)
    assert recombine(parts, ext) == eps
    assert bool(parts) == (not eps.is_identity())


def test_twist_decomposition_round_trips():
    inst = CounterexampleInstance.build()
    RL = inst.twist.target
    a = RL.const(RL.field.param("a"))
    b = RL.const(RL.field.param("b"))
    eps = HSDerivation.derivation(RL, [a * b + a**2, inst.H])
    parts = basis_decompose_derivation(eps, inst.twist)
    assert {key for key, _ in parts} == {(0, 0), (1, 0), (0, 1), (1, 1)}
    assert recombine(parts, inst.twist) == eps


# -- the counterexample -----------------------------------------------------------

def test_obstruction_is_forced_into_the_ideal():
    inst = CounterexampleInstance.build()
    out = k_side(inst, 4, 2)
    assert out["every_U_in_ideal"] and out["recheck"]
    assert out["staged_dx_plus_dy"] == "infeasible"


def test_report_shape():
    rep = counterexample_report()
    d = rep.to_dict()
    assert d["phi4_not_surjective"]
    assert d["mu2_coefficient"] == "u1^2 + v1^2"
    assert all(g["verified"] for g in d["l_side"]["generators"])
    assert "not surjective" in rep.to_text()


def test_leap_scan_flags_four_for_the_combinations():
    inst = CounterexampleInstance.build()
    rep = leap_scan(inst.ideal, 4, counterexample_witness_family(inst, include_partials=False))
    assert rep.candidates == [4]
    assert rep.consistent


def test_partial_derivatives_leap_at_two():
    inst = CounterexampleInstance.build()
    rows = {r["name"]: r for r in leap_scan(inst.ideal, 4, counterexample_witness_family(inst)).rows}
    assert rows["d_x"]["flag"] == rows["d_y"]["flag"] == 2
    assert rows["zero"]["flag"] is None


def test_coordinate_ideal_has_no_leaps():
    R = PolyRing(F2, ("x", "y"))
    x, y = R.gens()
    I = IdealPresentation(R, [x])
    witnesses = [
        ("d_y", HSDerivation.derivation(R, [R.zero(), R.one()])),
        ("x d_x", HSDerivation.derivation(R, [x, R.zero()])),
        ("y d_y + x d_x", HSDerivation.derivation(R, [x, y])),
        ("zero", HSDerivation.derivation(R, [R.zero(), R.zero()])),
    ]
    rep = leap_scan(I, 4, witnesses)
    assert rep.candidates == []
    assert all(set(r["statuses"].values()) == {"feasible"} for r in rep.rows)
