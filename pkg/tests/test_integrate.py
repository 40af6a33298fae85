import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hsder.basechange import CounterexampleInstance
from hsder.coeffs import PolyRing, make_field
from hsder.hs import HSDerivation, eval_phi, pad, truncate
from hsder.integrate import (
    AdditiveEquation,
    AdditiveUnknown,
    Bounds,
    ExtensionProblem,
    NonAdditiveError,
    additive_equation,
    find_log_integral,
    frobenius_linear_solve,
    log_extend_step,
    pad_integral,
    vanishing_gradient,
    verify_integral_witness,
)
from hsder.logideal import IdealPresentation, NotLogarithmicError, is_r_log
from hsder.sampling import random_full_log_hs, random_hs, standard_ideals

F2xy = PolyRing(make_field(2), ("x", "y"))


@pytest.fixture(scope="module")
def inst():
    return CounterexampleInstance.build()


def hs(R, m, **images):
    comps = [[R.const(c) if isinstance(c, int) else c for c in images.get(v, [])] for v in R.ring_vars]
    return HSDerivation.from_components(R, m, comps)


# -- bounds -------------------------------------------------------------------

def test_bounds_parse_and_defaults(monkeypatch):
    assert Bounds.parse("ring=6,param=2,depth=0") == Bounds(6, 2, 0)
    monkeypatch.setenv("HS_DEFAULT_BOUNDS", "ring=5")
    assert Bounds.from_env() == Bounds(5, None, 1)
    x, y = F2xy.gens()
    assert Bounds().resolve(IdealPresentation(F2xy, [x * y])) == Bounds(4, 0, 1)
    with pytest.raises(ValueError):
        Bounds.parse("size=3")


def test_default_bounds_follow_the_ideal(inst):
    b = Bounds().resolve(inst.ideal)
    assert (b.ring_degree, b.param_degree) == (4, 2)


# -- padding --------------------------------------------------------------------

def test_pad_derivation_to_three():
    x, y = F2xy.gens()
    E = pad_integral(hs(F2xy, 1, x=[x * y], y=[1]), 3)
    assert E == hs(F2xy, 3, x=[x * y], y=[1])


def test_pad_identity():
    assert pad(HSDerivation.identity(F2xy, 2), 5).is_identity()


@given(st.integers(0, 2**32), st.integers(1, 3), st.integers(1, 3))
def test_pads_truncate_back(seed, m, extra):
    D = random_hs(F2xy, m, 2, random.Random(seed))
    assert truncate(pad_integral(D, m + extra), m) == D
    assert truncate(pad_integral(D, m + extra), m) == truncate(pad_integral(D, m + 1), m)


# -- one stage -----------------------------------------------------------------------

def test_euler_derivation_extends_by_zero():
    x, y = F2xy.gens()
    I = IdealPresentation(F2xy, [x * y])
    rep = log_extend_step(ExtensionProblem(hs(F2xy, 1, x=[x]), I, 2))
    assert rep.feasible and rep.branch == "linear"
    assert rep.witness.component(2) == [F2xy.zero(), F2xy.zero()]


def test_square_root_witness_reopens_stage_two(inst):
    RL = inst.twist.target
    a, b = (RL.const(RL.field.param(n)) for n in "ab")
    rep = log_extend_step(ExtensionProblem(hs(RL, 3, x=[1], y=[1]), inst.twisted_ideal, 4))
    assert rep.feasible and rep.branch == "frobenius"
    assert rep.witness == hs(RL, 4, x=[1, a + b], y=[1])
    assert rep.attempts[-1].reopened_from == 2
    assert eval_phi(rep.witness, inst.twisted_ideal.gens[0]).coeffs[1:] == (RL.zero(),) * 4


def test_no_square_roots_means_no_constant_witness(inst):
    R = inst.k_ring
    prob = ExtensionProblem(hs(R, 3, x=[1], y=[1]), inst.ideal, 4, Bounds(0, 2, 1))
    rep = log_extend_step(prob)
    assert rep.status == "infeasible" and rep.bounded
    assert rep.recheck()


def test_stage_must_follow_length():
    x, y = F2xy.gens()
    with pytest.raises(ValueError):
        ExtensionProblem(hs(F2xy, 1, x=[x]), IdealPresentation(F2xy, [x * y]), 3)


def test_non_log_input_rejected():
    x, y = F2xy.gens()
    with pytest.raises(NotLogarithmicError):
        ExtensionProblem(hs(F2xy, 1, x=[1]), IdealPresentation(F2xy, [x * y]), 2)


# -- full integrals -------------------------------------------------------------------

def test_translation_integral_over_twisted_field(inst):
    RL = inst.twist.target
    delta = HSDerivation.derivation(RL, [RL.one(), RL.one()])
    rep = find_log_integral(delta, inst.twisted_ideal, 4)
    assert rep.feasible
    assert eval_phi(rep.witness, inst.twisted_ideal.gens[0]) == eval_phi(
        HSDerivation.identity(RL, 4), inst.twisted_ideal.gens[0]
    )


@pytest.mark.parametrize("p", [2, 3])
def test_zero_derivation_integrates_to_identity(p):
    for I in standard_ideals(p)[1]:
        rep = find_log_integral(HSDerivation.identity(I.ring, 1), I, 3)
        assert rep.feasible and rep.witness.is_identity()


def test_euler_derivation_three_integral():
    x, y = F2xy.gens()
    I = IdealPresentation(F2xy, [x * y])
    delta = hs(F2xy, 1, x=[x])
    rep = find_log_integral(delta, I, 3)
    assert rep.feasible and is_r_log(rep.witness, I)
    assert verify_integral_witness(rep.witness, delta, I)


@given(st.integers(0, 2**32), st.sampled_from([2, 3]), st.integers(0, 1), st.integers(2, 3))
def test_returned_witnesses_verify(seed, p, which, n):
    rng = random.Random(seed)
    I = standard_ideals(p)[1][which]
    delta = truncate(random_full_log_hs(I, 1, rng), 1)
    rep = find_log_integral(delta, I, n)
    assert rep.feasible
    assert verify_integral_witness(rep.witness, delta, I)


# -- witness verification --------------------------------------------------------------

def test_witness_checks(inst):
    RL = inst.twist.target
    a, b = (RL.const(RL.field.param(n)) for n in "ab")
    I = inst.twisted_ideal
    delta = HSDerivation.derivation(RL, [RL.one(), RL.one()])
    assert verify_integral_witness(hs(RL, 4, x=[1, a + b], y=[1]), delta, I)
    E = hs(RL, 4, x=[1], y=[1])
    assert not verify_integral_witness(E, delta, I)
    s_plus_t = inst.twist.embed_poly(inst.k_ring.const(inst.k_ring.field.param("s") + inst.k_ring.field.param("t")))
    assert eval_phi(E, I.gens[0]).coeffs[4] == s_plus_t
    assert verify_integral_witness(HSDerivation.identity(F2xy, 3), HSDerivation.identity(F2xy, 1),
                                   IdealPresentation(F2xy, [F2xy.gen("x")]))


# -- Frobenius-linear systems ---------------------------------------------------------

def test_square_is_injective():
    R = PolyRing(make_field(2), ("x",))
    u = AdditiveUnknown("W", tuple(R.monomials_up_to(3)))
    sol = frobenius_linear_solve(R, [AdditiveEquation(R.zero(), ((R.one(), "W", 1),))], [u])
    assert sol.feasible and sol.kernel == [] and not any(sol.particular)


def test_square_divisible_by_square_forces_factor():
    R = PolyRing(make_field(2), ("x",))
    x = R.gen("x")
    u = AdditiveUnknown("W", tuple(R.monomials_up_to(3)))
    I = IdealPresentation(R, [x**2])
    sol = frobenius_linear_solve(R, [AdditiveEquation(R.zero(), ((R.one(), "W", 1),))], [u], I)
    assert len(sol.kernel) == 3
    for v in sol.kernel:
        assert sol.assignment(v)["W"].coeff((0,)) == 0


def test_small_counterexample_system(inst):
    from hsder.basechange import obstruction_system

    unknowns, eqs = obstruction_system(inst, 5, 2)
    sol = frobenius_linear_solve(inst.k_ring, eqs, unknowns, inst.ideal)
    assert sol.recheck()
    for v in sol.kernel:
        assert inst.ideal.contains(sol.assignment(v).get("U", inst.k_ring.zero()))


def test_additive_equation_split():
    S = PolyRing(make_field(2), ("x", "W", "U"))
    R = PolyRing(make_field(2), ("x",))
    x, W, U = S.gens()
    eq = additive_equation(W**2 + x * U**4 + x**3, ("W", "U"), R)
    assert eq.constant == R.gen("x") ** 3
    assert {(name, e) for _, name, e in eq.terms} == {("W", 1), ("U", 2)}
    with pytest.raises(NonAdditiveError):
        additive_equation(W * U, ("W", "U"), R)
    with pytest.raises(NonAdditiveError):
        additive_equation(W**3, ("W", "U"), R)


def test_vanishing_gradient_detection(inst):
    HL = IdealPresentation(inst.twist.target, [inst.H])
    assert vanishing_gradient(inst.twisted_ideal)
    assert not vanishing_gradient(HL)
    rep = find_log_integral(HSDerivation.derivation(inst.twist.target, [inst.twist.target.one()] * 2),
                            inst.twisted_ideal, 4)
    assert rep.vanishing_gradient and rep.branch == "frobenius"


def test_reports_serialize(inst):
    R = inst.k_ring
    rep = find_log_integral(HSDerivation.derivation(R, [R.one(), R.one()]), inst.ideal, 4)
    doc = json.loads(rep.to_json())
    assert doc["status"] == "infeasible" and doc["bounded"] is True
    assert rep.recheck()
    assert rep.to_json() == find_log_integral(HSDerivation.derivation(R, [R.one(), R.one()]), inst.ideal, 4).to_json()


