"""Named verification suites shared by the command line and the acceptance tests."""

from __future__ import annotations

from fractions import Fraction

from .constructions import (DEFAULT_CURVE_DEGREE, DEFAULT_FAMILY_DEGREE, CurveRingSpec, FamilySpec,
                            branch_curve, curve_dims_oracle, curve_ring_ideal, elimination_report,
                            flatness_check, instance_rng, model_from_curve_spec, random_curve_spec,
                            random_family_spec, subring_generation_check)
from .groebner import Ideal, hilbert_function, ideal_contains
from .pfaffian import (GENERIC_EXTRASYM_PROFILE, ExtrasymmetricSpec, SkewMatrix6, all_pfaffians,
                       build_extrasymmetric, generic_extrasym_ring, reduce_to_nine, segre_double,
                       two_by_two_minors)
from .polyring import FieldSpec, WeightedRing
from .report import VerificationReport, check, stopwatch


def segre_ring(field: FieldSpec) -> WeightedRing:
    return WeightedRing([f"a{i}{j}" for i in range(1, 4) for j in range(1, 4)], None, field)


def segre_report(field: FieldSpec) -> VerificationReport:
    """The fifteen Pfaffians of the skew doubling of a generic 3x3 matrix
    against its nine 2x2 minors; both containments are tested."""
    report = VerificationReport("verify-segre", str(field))
    R = segre_ring(field)
    A = [[R.var(f"a{i}{j}") for j in range(1, 4)] for i in range(1, 4)]
    with stopwatch() as ms:
        P = Ideal(R, all_pfaffians(segre_double(A)).nonzero())
        M = Ideal(R, two_by_two_minors(A))
        forward, backward = ideal_contains(M, P), ideal_contains(P, M)
    ok = forward and backward
    report.add(check("pfaffians-equal-minors", ok,
                     {} if ok else {"pfaffians_in_minors": forward, "minors_in_pfaffians": backward},
                     {"generators": [len(P.generators), len(M.generators)]}, ms[0]))
    return report


def extrasym_report(field: FieldSpec, matrix: SkewMatrix6 | None = None) -> VerificationReport:
    """Greedy choice of generators among the fifteen Pfaffians; the leftovers must
    lie in the ideal of the chosen ones.  For the generic matrix exactly nine are kept."""
    report = VerificationReport("verify-extrasym", str(field if matrix is None else matrix.ring.field))
    generic = matrix is None
    if generic:
        R = generic_extrasym_ring(field)
        matrix = build_extrasymmetric(ExtrasymmetricSpec.generic(R), GENERIC_EXTRASYM_PROFILE)
    with stopwatch() as ms:
        nine = reduce_to_nine(matrix)
    outside = [s for s, ok in zip(nine.residuals, nine.residual_membership) if not ok]
    names = lambda subs: ",".join("Pf_" + "".join(map(str, s)) for s in subs)
    report.add(check("residuals-in-chosen-ideal", not outside,
                     {"chosen": names(nine.chosen), **({"outside": names(outside)} if outside else {})},
                     {"chosen_count": [len(nine.chosen)]}, ms[0]))
    n = len(nine.chosen)
    if generic:
        report.add(check("nine-generators", n == 9, {"chosen": names(nine.chosen)}, {"chosen_count": [n]}))
    else:
        report.add(check("at-most-nine-generators", n <= 9, {"chosen": names(nine.chosen)},
                         {"chosen_count": [n]}))
    return report


def curve_ring_report(spec: CurveRingSpec, D: int = DEFAULT_CURVE_DEGREE) -> VerificationReport:
    report = VerificationReport("curve-ring", str(spec.field))
    oracle = curve_dims_oracle(D).as_list()
    with stopwatch() as ms:
        got = hilbert_function(curve_ring_ideal(spec), D).as_list()
    report.add(check("hilbert-equals-oracle", got == oracle,
                     {} if got == oracle else {"got": got, "oracle": oracle},
                     {"hilbert": got}, ms[0]))
    report.extend(subring_generation_check(model_from_curve_spec(spec), D, spec))
    return report


def family_report(spec: FamilySpec, t_list, D: int = DEFAULT_FAMILY_DEGREE) -> VerificationReport:
    return flatness_check(spec, t_list, D)


def eliminate_report(spec: FamilySpec, D: int = DEFAULT_FAMILY_DEGREE) -> VerificationReport:
    return elimination_report(spec, D)


def branch_report(spec: FamilySpec) -> VerificationReport:
    _, report = branch_curve(spec.at(0))
    return report


def full_suite(seed: int, field: FieldSpec, trials: int = 3, include_rational: bool = True
               ) -> VerificationReport:
    """Every suite on seed-derived instances; curve and family suites use
    ``trials`` independent instances each."""
    report = VerificationReport("suite", str(field), seed)
    fields = [field] + ([FieldSpec.rationals()] if include_rational and field.modulus else [])
    for F in fields:
        report.extend(segre_report(F), f"segre[{F}]/")
        report.extend(extrasym_report(F), f"extrasym[{F}]/")
    for k in range(trials):
        cs = random_curve_spec(instance_rng(seed, "curve", k), field)
        report.extend(curve_ring_report(cs), f"curve[{k}]/")
        fs = random_family_spec(instance_rng(seed, "family", k), field)
        report.extend(family_report(fs, [0, 1, 7]), f"family[{k}]/")
        report.extend(eliminate_report(ensure_w_term(fs).at(1)), f"eliminate[{k}]/")
        report.extend(branch_report(fs), f"branch[{k}]/")
    return report


def ensure_w_term(spec: FamilySpec) -> FamilySpec:
    """Random P4 has a zero w-coefficient with probability 1/p; bump it to 1 then."""
    if spec.w_coefficient():
        return spec
    w = spec.ring.var("w")
    return FamilySpec(spec.P3, spec.P4 + w, spec.P9, spec.t)


def parse_t_list(text: str) -> list[Fraction]:
    try:
        values = [Fraction(s.strip()) for s in text.split(",") if s.strip()]
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad t list {text!r}") from None
    if not values:
        raise ValueError("empty t list")
    return values
