from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pfaffring.polyring import (QQ, ClearingError, FieldSpec, ParseError, Polynomial, RingMismatchError,
                                WeightedRing, format_poly, monomials_of_degree, parse,
                                random_homogeneous, substitute, substitute_cleared)

from conftest import GF5, GF32003

CURVE = WeightedRing("x y z w v u".split(), [1, 2, 3, 4, 5, 6], QQ)
FAMILY = WeightedRing("x0 x1 y z w v u".split(), [1, 1, 2, 3, 4, 5, 6], QQ)
SMALL = WeightedRing(["x", "y", "z"], [1, 2, 3], QQ)


def polys(ring, max_terms=5, max_exp=3):
    n = ring.nvars
    coeff = (st.fractions(min_value=-20, max_value=20, max_denominator=6)
             if ring.field.modulus is None else st.integers(-50, 50))
    mono = st.tuples(*[st.integers(0, max_exp)] * n)
    return st.dictionaries(mono, coeff, max_size=max_terms).map(lambda d: Polynomial(ring, d))


SMALL_GF = SMALL.with_field(GF32003)


# ---- fields ---------------------------------------------------------------

def test_field_parse_and_print():
    assert FieldSpec.parse("QQ") == QQ
    assert FieldSpec.parse("GF(32003)") == GF32003
    assert str(GF32003) == "GF(32003)"


@pytest.mark.parametrize("bad", ["GF(2)", "GF(15)", "GF(1)", "ZZ", "GF(x)"])
def test_field_parse_rejects(bad):
    with pytest.raises(ValueError):
        FieldSpec.parse(bad)


def test_field_coerces_fractions():
    assert GF5(Fraction(1, 2)) == 3
    with pytest.raises(ZeroDivisionError):
        GF5(Fraction(1, 5))


# ---- rings ----------------------------------------------------------------

def test_ring_rejects_bad_declarations():
    with pytest.raises(ValueError):
        WeightedRing(["x", "x"], [1, 1])
    with pytest.raises(ValueError):
        WeightedRing(["x"], [0])
    with pytest.raises(ValueError):
        WeightedRing(["x", "y"], [1])


def test_ring_declaration_round_trip():
    line = "ring x0:1 x1:1 y:2 z:3 w:4 v:5 u:6 over GF(32003)"
    R = WeightedRing.parse(line)
    assert R.declaration() == line
    assert R.weights == (1, 1, 2, 3, 4, 5, 6)


def test_monomial_count_weights_1123():
    # x0^3, x0^2 x1, x0 x1^2, x1^3, x0 y, x1 y, z
    assert len(monomials_of_degree((1, 1, 2, 3), 3)) == 7


# ---- arithmetic -----------------------------------------------------------

def test_additive_identity():
    f = SMALL("x^2*y - 3*z + 1/2")
    assert SMALL.zero() + f == f


def test_difference_of_squares():
    x, y = SMALL.var("x"), SMALL.var("y")
    assert (x + y) * (x - y) == x ** 2 - y ** 2


def test_prime_field_product():
    R = SMALL.with_field(GF5)
    x = R.var("x")
    assert (3 * x) * (4 * x) == 2 * x ** 2


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        CURVE.var("x") + SMALL.var("x")


def test_no_zero_coefficients_stored():
    x = SMALL.var("x")
    f = x + 1 - x
    assert dict(f.items()) == {(0, 0, 0): 1}


@pytest.mark.parametrize("ring", [SMALL, SMALL_GF], ids=["QQ", "GF"])
@given(data=st.data())
def test_ring_axioms(ring, data):
    f, g, h = (data.draw(polys(ring)) for _ in range(3))
    assert (f + g) + h == f + (g + h)
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == ring.zero()
    assert f * ring.one() == f


# ---- grading --------------------------------------------------------------

def test_weighted_degree_examples():
    assert CURVE.var("w").weighted_degree() == 4
    assert (CURVE.var("z") * CURVE.var("w")).weighted_degree() == 7
    assert (CURVE.var("x") + CURVE.var("y")).weighted_degree() is None


def test_zero_has_no_degree():
    with pytest.raises(ValueError):
        CURVE.zero().weighted_degree()


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 10 ** 6))
def test_degree_is_additive(d1, d2, seed):
    import random
    rng = random.Random(seed)
    f = random_homogeneous(SMALL_GF, d1, rng)
    g = random_homogeneous(SMALL_GF, d2, rng)
    if f and g:
        assert (f * g).weighted_degree() == d1 + d2


# ---- substitution ---------------------------------------------------------

def test_substitute_examples():
    z = SMALL.var("z")
    y = SMALL.var("y")
    assert substitute(z ** 2, {"z": y ** 2}) == y ** 4
    W = WeightedRing(["X", "T", "S"], [1, 7, 6], QQ)
    T = W.var("T")
    assert substitute(T ** 2, {"T": W.var("X") * W.var("S")}) == W("X^2*S^2")


@given(data=st.data())
def test_substitute_is_a_homomorphism(data):
    f, g = data.draw(polys(SMALL)), data.draw(polys(SMALL))
    a = {"x": SMALL("x + y"), "y": SMALL("x*z - 2"), "z": SMALL("1/3*y")}
    assert substitute(f * g, a) == substitute(f, a) * substitute(g, a)
    assert substitute(f + g, a) == substitute(f, a) + substitute(g, a)


def test_substitute_cleared_examples():
    B = WeightedRing(["x0", "x1", "y"], [1, 1, 2], QQ)
    assert substitute_cleared(FAMILY("z^2*w")) == B("y^7")
    assert substitute_cleared(FAMILY("x1*x1*w^2")) == B("x1^2*y^6")
    assert substitute_cleared(FAMILY("x0^4")) == B("x0^4*x1^4")


def test_substitute_cleared_names_worst_monomial():
    with pytest.raises(ClearingError) as err:
        substitute_cleared(FAMILY("w^3 + z*w"), 4)
    assert err.value.monomial == "w^3"
    assert err.value.exponent == -2


def test_substitute_cleared_rejects_v_u():
    with pytest.raises(ValueError):
        substitute_cleared(FAMILY("v*w"))


@given(st.integers(0, 10 ** 6))
def test_branch_shape_always_clears(seed):
    import random
    rng = random.Random(seed)
    R = FAMILY.with_field(GF32003)
    base = ("x0", "x1", "y", "z", "w")
    P4 = random_homogeneous(R, 4, rng, base)
    P9 = random_homogeneous(R, 9, rng, base)
    z, x1 = R.var("z"), R.var("x1")
    out = substitute_cleared(z ** 2 * P4 + x1 * P9, 4)
    assert not out or out.weighted_degree() == 14


# ---- parse / format -------------------------------------------------------

def test_parse_with_binding():
    P = CURVE("x^9 + y*w*z")
    f = CURVE("v^2 - z^2*w - x*P", P=P)
    x, z, w, v = (CURVE.var(n) for n in "xzwv")
    assert f == v ** 2 - z ** 2 * w - x * P


def test_format_zero():
    assert format_poly(SMALL.zero()) == "0"


def test_format_descending_order():
    assert format_poly(SMALL("1 + x + y + x^2")) == "x^2 + y + x + 1"


def test_format_symmetric_residues():
    assert format_poly(SMALL_GF("32002*x")) == "-x"


@pytest.mark.parametrize("text,pos", [("x + * y", 4), ("x^", 2), ("(x + y", 6), ("x + q", 4)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse(text, SMALL)
    assert err.value.position == pos


def test_parse_rejects_polynomial_division():
    with pytest.raises(ParseError):
        parse("x/y", SMALL)


@pytest.mark.parametrize("ring", [SMALL, SMALL_GF, FAMILY], ids=["QQ", "GF", "family"])
@given(data=st.data())
def test_parse_format_round_trip(ring, data):
    f = data.draw(polys(ring))
    assert parse(format_poly(f), ring) == f
    text = format_poly(f)
    assert format_poly(parse(text, ring)) == text


def test_round_trip_seeded_hundred(rng):
    R = FAMILY.with_field(GF32003)
    for k in range(100):
        f = random_homogeneous(R, k % 13, rng)
        assert R(str(f)) == f


def test_random_homogeneous_uses_all_monomials(rng):
    f = random_homogeneous(SMALL_GF, 6, rng)
    assert f.weighted_degree() == 6
    assert len(f) == len(monomials_of_degree(SMALL.weights, 6))
