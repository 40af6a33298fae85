import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsder.coeffs import PolyRing, make_field
from hsder.sampling import random_hs, random_poly
from hsder.textio import (
    ParseError,
    format_derivation,
    format_ideal,
    parse_derivation,
    parse_header,
    parse_ideal,
    parse_poly,
)
from hsder.logideal import IdealPresentation


def test_header():
    h = parse_header("p=2 vars=x,y len=4")
    assert (h.p, h.vars, h.length, h.params) == (2, ("x", "y"), 4, ())
    assert str(h) == "p=2 vars=x,y len=4"


@pytest.mark.parametrize("text", ["p=2", "vars=x", "p=2 vars=x color=red", "p=4 vars=x", "p=2 vars=x,mu",
                                  "p=2 vars=x p=3", "p=two vars=x"])
def test_bad_headers(text):
    with pytest.raises(ParseError):
        parse_header(text)


def test_derivation_file():
    D = parse_derivation("p=2 vars=x,y len=4\n# partial in x\nx -> x + mu\ny -> y\n")
    assert D.length == 4
    assert D.component(1) == [D.ring.one(), D.ring.zero()]
    assert D.component(2) == [D.ring.zero(), D.ring.zero()]


def test_malformed_constant_term_reports_location():
    with pytest.raises(ParseError) as err:
        parse_derivation("p=2 vars=x,y len=2\nx -> x + mu\ny -> x + y + mu\n")
    assert err.value.line == 3 and err.value.column > 1
    assert "line 3" in str(err.value)


@pytest.mark.parametrize("body", ["x -> x + + mu", "z -> z", "x -> x\nx -> x", "x -> x + mu/0", "x = x"])
def test_grammar_violations(body):
    with pytest.raises(ParseError):
        parse_derivation("p=3 vars=x,y len=2\n" + body + "\ny -> y\n")


def test_division_by_parameter_fraction():
    R = PolyRing(make_field(2, ("s", "t")), ("x",))
    f = parse_poly("x/(s+t) + s^2*x^2", R)
    assert f * (R.const(R.field.param("s") + R.field.param("t"))) == R.gen("x") + parse_poly("(s^3+s^2*t)*x^2", R)


def test_ideal_file():
    I = parse_ideal("p=2 vars=x,y\ny^2 + x^3\n")
    x, y = I.ring.gens()
    assert I == IdealPresentation(I.ring, [y**2 + x**3])
    assert parse_ideal(format_ideal(I)) == I


@settings(max_examples=30)
@given(st.integers(0, 2**32), st.sampled_from([(), ("s",), ("s", "t")]), st.integers(1, 4))
def test_round_trip(seed, params, m):
    rng = random.Random(seed)
    R = PolyRing(make_field(3, params), ("x", "y"))
    D = random_hs(R, m, 2, rng)
    assert parse_derivation(format_derivation(D)) == D
    f = random_poly(R, 3, rng)
    assert parse_poly(str(f), R) == f
