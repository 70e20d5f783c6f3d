import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pfaffring.constructions import (ROW_PROFILE, CurveRingSpec, FamilySpec, HyperellipticModel,
                                     SpecError, backsubstitution, branch_curve, curve_dims_oracle,
                                     curve_matrix, curve_ring, curve_ring_ideal,
                                     eliminate_to_hypersurface, family_hilbert, family_matrix,
                                     family_ring, flatness_check, format_curve_spec, format_family_spec,
                                     hypersurface_dims, hypersurface_ring, instance_rng, lift_p13,
                                     model_from_curve_spec, parse_curve_spec, parse_family_spec,
                                     random_curve_spec, random_family_spec, random_model,
                                     semicanonical_dims, subring_degree, subring_generation_check,
                                     subring_image, xy_ring, xyt_ring)
from pfaffring.groebner import hilbert_function, ideal_member
from pfaffring.pfaffian import all_pfaffians, solve_profile
from pfaffring.polyring import QQ, monomials_of_degree, substitute

from conftest import GF32003

SEMICANONICAL_12 = [1, 2, 4, 7, 11, 16, 23, 31, 41, 52, 65, 79, 95]
CURVE_14 = [1, 1, 2, 3, 4, 5, 7, 8, 10, 11, 13, 14, 16, 17, 19]

FR = family_ring(GF32003)
CR = curve_ring(GF32003)


def fam(P3="z", P4="w", P9="x1^9", t=0, ring=FR):
    return FamilySpec(ring(P3), ring(P4), ring(P9), Fraction(t))


# ---- counting formulas ----------------------------------------------------

@pytest.mark.parametrize("d,dim", [(0, 1), (3, 7), (4, 11), (5, 16), (12, 95)])
def test_semicanonical_examples(d, dim):
    assert semicanonical_dims(d) == dim


def test_semicanonical_table():
    assert [semicanonical_dims(d) for d in range(13)] == SEMICANONICAL_12


def test_curve_oracle_low_degrees():
    assert curve_dims_oracle(7).as_list() == [1, 1, 2, 3, 4, 5, 7, 8]
    assert curve_dims_oracle(14).as_list() == CURVE_14


def test_curve_oracle_by_brute_force():
    # count X^a Y^b and X^a Y^b T of weighted degree n directly
    for d in range(15):
        n = subring_degree(d)
        count = sum(1 for a in range(n + 1) for b in range(n + 1) for t in (0, 1)
                    if a + 2 * b + 7 * t == n)
        assert curve_dims_oracle(14)[d] == count


def test_degree_six_is_a_difference_of_semicanonical_dims():
    assert curve_dims_oracle(6)[6] == semicanonical_dims(6) - semicanonical_dims(5) == 7


def test_first_differences_match_curve_oracle():
    oracle = curve_dims_oracle(14)
    for d in range(1, 15):
        assert semicanonical_dims(d) - semicanonical_dims(d - 1) == oracle[d]


def test_hypersurface_formula_matches_semicanonical():
    assert hypersurface_dims(12).as_list() == SEMICANONICAL_12


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        semicanonical_dims(-1)


# ---- curve ring -----------------------------------------------------------

def test_model_validation():
    R = xy_ring(GF32003)
    with pytest.raises(SpecError):
        HyperellipticModel(R("2*Y^7 + X^14"))
    with pytest.raises(SpecError):
        HyperellipticModel(R("Y^7 + X^13"))
    m = HyperellipticModel(R("Y^7 + X^2*Y^6 + 5*X^14"))
    assert m.p13() == R("X*Y^6 + 5*X^13")


def test_curve_spec_validation():
    with pytest.raises(SpecError):
        CurveRingSpec(CR("x^4*v"))
    with pytest.raises(SpecError):
        CurveRingSpec(CR("x^8"))
    CurveRingSpec(CR.zero())


def test_degree_two_piece():
    model = random_model(random.Random(1))
    W = xyt_ring(GF32003)
    assert subring_image(CR("x^2"), model) == W("X^3")
    assert subring_image(CR("y"), model) == W("X*Y")
    assert subring_image(CR("x"), model) == W("X")


def test_twisted_map_is_homogeneous_and_plain_substitution_is_not():
    R = xy_ring(GF32003)
    X, Y = R.gens()
    plain_images = {"x": X, "y": X * Y, "z": Y ** 2, "w": Y ** 3, "v": R.zero(), "u": R.zero()}
    model = HyperellipticModel(Y ** 7)
    for m in monomials_of_degree(CR.weights, 9):
        if m[4] or m[5]:
            continue
        mono = CR.monomial(m)
        twisted = subring_image(mono, model)
        assert twisted.weighted_degree() == 13
        plain = substitute(mono, plain_images, target=R)
        agrees = plain.to_ring(twisted.ring) == twisted
        assert agrees == (m[0] + m[2] <= 1)


@pytest.mark.parametrize("seed", range(3))
def test_subring_spans_through_degree_14(seed):
    report = subring_generation_check(random_model(random.Random(seed)), 14)
    assert report.ok, report.summary()


def test_lift_round_trip():
    model = random_model(random.Random(4))
    spec = lift_p13(model.p13())
    assert model_from_curve_spec(spec).P14 == model.P14


def test_pfaffians_vanish_on_the_curve():
    spec = random_curve_spec(random.Random(2))
    model = model_from_curve_spec(spec)
    for s, f in all_pfaffians(curve_matrix(spec)).items():
        assert not subring_image(f, model), s


def test_curve_ideal_contains_displayed_relations():
    spec = random_curve_spec(random.Random(3))
    I = curve_ring_ideal(spec)
    P = spec.P9
    assert ideal_member(I, CR("x*z - y^2"))
    assert ideal_member(I, CR("v^2 - z^2*w - x*P", P=P))
    assert ideal_member(I, CR("u^2 - w^3 - z*P", P=P))


def test_curve_hilbert_degree_six():
    spec = random_curve_spec(random.Random(8))
    assert hilbert_function(curve_ring_ideal(spec), 6)[6] == 7


def test_curve_hilbert_over_rationals():
    spec = random_curve_spec(random.Random(8), QQ)
    assert hilbert_function(curve_ring_ideal(spec), 14).as_list() == CURVE_14


# ---- family ---------------------------------------------------------------

def test_family_matrix_entries():
    spec = random_family_spec(random.Random(0), t=3)
    M = family_matrix(spec)
    g = FR.var
    t = FR.const(3)
    rows = [[t, g("z"), g("v"), g("y"), g("x1")],
            [g("w"), g("u"), spec.P3, g("y")],
            [spec.P9, g("u"), g("v")],
            [g("w") * spec.P4, g("z") * spec.P4],
            [t * spec.P4]]
    for i, row in enumerate(rows, 1):
        for j, e in enumerate(row, i + 1):
            assert M[i, j] == e
    assert solve_profile(M) == ROW_PROFILE


def test_zero_family_matrix_has_only_variable_entries():
    Z = FR.zero()
    M = family_matrix(FamilySpec(Z, Z, Z, Fraction(0)))
    for (i, j), e in M.entries().items():
        assert not e or (len(e) == 1 and e.sorted_terms()[0][1] == 1 and e.max_degree() >= 1)


def test_named_family_pfaffians():
    spec = random_family_spec(random.Random(1), t=2)
    pf = all_pfaffians(family_matrix(spec))
    t = FR.const(2)
    x1, y, z, w, v, u = (FR.var(n) for n in ("x1", "y", "z", "w", "v", "u"))
    assert pf[1, 2, 3, 5] == t * u - z * spec.P3 + y * w
    assert pf[1, 2, 3, 6] == t * v - z * y + x1 * w
    assert pf[1, 2, 5, 6] == t * t * spec.P4 - y ** 2 + x1 * spec.P3
    assert pf[1, 2, 3, 4].weighted_degree() == 9
    assert pf[1, 3, 4, 5].weighted_degree() == 11


@pytest.mark.parametrize("bad", [dict(P3="x0^2"), dict(P4="v"), dict(P9="x1^4*v"), dict(P3="z + x0")])
def test_family_spec_validation(bad):
    with pytest.raises(SpecError):
        fam(**bad)


def test_family_spec_accepts_zeros():
    fam(P3="0", P4="0", P9="0")


def test_family_hilbert_central_fibre():
    spec = random_family_spec(random.Random(6))
    table = family_hilbert(spec, 12)
    assert table[4] == 11 and table[12] == 95


def test_flatness_report_records_each_fibre():
    report = flatness_check(random_family_spec(random.Random(7)), [0, 1], 8)
    assert report.ok
    names = {c.name for c in report.checks}
    assert {"hilbert-t=0", "hilbert-t=1", "flatness", "central-fibre-semicanonical"} <= names


# ---- elimination ----------------------------------------------------------

def hand_hypersurface(H):
    # w = y^2 - x1*z, v = z*y - x1*w, u = z^2 - y*w; Pf_1234 = x1^9 - z*u + v*w
    x1, y, z = H.var("x1"), H.var("y"), H.var("z")
    w = y ** 2 - x1 * z
    v = z * y - x1 * w
    u = z * z - y * w
    return x1 ** 9 - z * u + v * w


@pytest.mark.parametrize("ring", [FR, family_ring(QQ)], ids=["GF", "QQ"])
def test_hand_elimination(ring):
    spec = fam(t=1, ring=ring)
    res = eliminate_to_hypersurface(spec)
    expected = hand_hypersurface(hypersurface_ring(ring.field))
    lead = expected.sorted_terms()[0][1]
    assert res.generator == expected / lead
    assert res.backsub_generator == res.generator
    assert res.generator.weighted_degree() == 9
    assert (1, 2, 3, 4) in res.scalar_multiples


def test_backsubstitution_solves_three_pfaffians():
    spec = random_family_spec(random.Random(3), t=5)
    sol = backsubstitution(spec)
    pf = all_pfaffians(family_matrix(spec))
    H = hypersurface_ring(GF32003)
    for s in ((1, 2, 3, 5), (1, 2, 3, 6), (1, 2, 5, 6)):
        assert not substitute(pf[s], sol, target=H)


@pytest.mark.parametrize("seed", range(3))
def test_random_elimination_degree_and_hilbert(seed):
    spec = random_family_spec(random.Random(seed), t=1)
    res = eliminate_to_hypersurface(spec)
    assert res.generator.weighted_degree() == 9
    from pfaffring.groebner import Ideal
    assert hilbert_function(Ideal(res.generator.ring, [res.generator]), 12).as_list() == SEMICANONICAL_12


def test_elimination_preconditions():
    with pytest.raises(SpecError):
        eliminate_to_hypersurface(fam(t=0))
    with pytest.raises(SpecError):
        eliminate_to_hypersurface(fam(P4="x0^4", t=1))


# ---- branch curve ---------------------------------------------------------

def test_branch_hand_instance():
    B, report = branch_curve(fam(P4="w", P9="x1*w^2"))
    assert B == B.ring("y^7 + x1^2*y^6")
    assert report.ok


def test_branch_without_p9():
    B, report = branch_curve(fam(P4="w", P9="0"))
    assert B == B.ring("y^7")


def test_branch_needs_central_fibre():
    with pytest.raises(SpecError):
        branch_curve(fam(t=1))


@given(st.integers(0, 10 ** 6))
def test_branch_degree_and_membership(seed):
    spec = random_family_spec(random.Random(seed))
    B, report = branch_curve(spec)
    assert B.weighted_degree() == 14
    assert report.ok


# ---- spec files and seeds -------------------------------------------------

FAMILY_TEXT = """ring x0:1 x1:1 y:2 z:3 w:4 v:5 u:6 over GF(32003)
# P3 = z subfamily
P3 = z
P4 = w + x0^4
P9 = x1^9
t = 1/2
"""


def test_parse_family_spec():
    spec = parse_family_spec(FAMILY_TEXT)
    assert spec.t == Fraction(1, 2)
    assert spec.P4 == FR("w + x0^4")
    assert parse_family_spec(format_family_spec(spec)) == spec


@pytest.mark.parametrize("text", [
    FAMILY_TEXT.replace("P9 = x1^9\n", ""),
    FAMILY_TEXT.replace("t = 1/2", "t = abc"),
    FAMILY_TEXT.replace("t = 1/2", "s = 1"),
    FAMILY_TEXT.replace("u:6", "u:7"),
    FAMILY_TEXT.replace("P3 = z", "P3 = z\nP3 = z"),
    FAMILY_TEXT.replace("P3 = z", "P3 z"),
    "P3 = z\n",
])
def test_family_spec_file_errors(text):
    with pytest.raises(ValueError):
        parse_family_spec(text)


def test_curve_spec_round_trip():
    spec = random_curve_spec(random.Random(0))
    assert parse_curve_spec(format_curve_spec(spec)) == spec


def test_instance_streams_are_deterministic_and_distinct():
    a = [instance_rng(5, "family", 0).random() for _ in range(2)]
    assert a == [instance_rng(5, "family", 0).random() for _ in range(2)]
    assert instance_rng(5, "family", 1).random() != a[0]
    assert instance_rng(5, "curve", 0).random() != a[0]
