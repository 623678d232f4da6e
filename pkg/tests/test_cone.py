import math

import pytest

from kreweras.cone import (
    Classification,
    ConeSpec,
    DegenerateCase,
    ToleranceExceeded,
    asymptotic_fit,
    classify,
    cone_asymptotic,
    reflect_series,
    reflect_series_rou,
)
from kreweras.coverwalk import corridor_series, plane_oracle


def all_specs(max_width):
    out = []
    for k1 in range(-max_width + 1, 0):
        for k2 in range(1, max_width + 1):
            if k2 - k1 > max_width:
                continue
            for k in range(-max_width, max_width + 1):
                if k1 < 2 * k < k2:
                    out.append(ConeSpec(k, k1, k2))
    return out


def counts(series, n_max):
    return [int(series.coefficient(n).coefficient(0)) for n in range(n_max + 1)]


def test_spec_validation():
    with pytest.raises(ValueError):
        ConeSpec(0, 1, 2)
    with pytest.raises(ValueError):
        ConeSpec(1, -1, 2)
    assert ConeSpec(0, -2, 3).opening_angle == pytest.approx(5 * math.pi / 3)


def test_trivial_low_orders(vertex_gf_15):
    series = reflect_series(ConeSpec(0, -1, 1), 1, vertex_gf_15)
    assert counts(series, 1) == [1, 0]


def test_example_quarter_plane(vertex_gf_15):
    series = reflect_series(ConeSpec(0, -1, 1), 15, vertex_gf_15)
    oracle = plane_oracle([(-1, -1), (0, 1), (1, 0)], "quarter", (0, 0), (0, 0), 15)
    assert counts(series, 15) == oracle


def test_example_three_quarter_plane(vertex_gf_15):
    series = reflect_series(ConeSpec(0, -2, 3), 12, vertex_gf_15)
    oracle = plane_oracle([(0, 1), (-1, 0), (1, -1)], "three-quarter", (0, -1), (0, -1), 12)
    assert counts(series, 12) == oracle


def test_reflection_agrees_with_corridor_dp(vertex_gf_15):
    for spec in all_specs(6):
        series = reflect_series(spec, 10, vertex_gf_15)
        assert counts(series, 10) == corridor_series(spec.k, spec.k1, spec.k2, 10), spec


def test_reflection_bounded_by_unconstrained(vertex_gf_15):
    for spec in all_specs(4):
        series = reflect_series(spec, 12, vertex_gf_15)
        for n in range(13):
            total = vertex_gf_15.coefficient(n).evaluate_exact(1)
            assert 0 <= series.coefficient(n).coefficient(0) <= total


def test_widening_monotonicity(vertex_gf_15):
    base = counts(reflect_series(ConeSpec(0, -2, 2), 12, vertex_gf_15), 12)
    for wider in (ConeSpec(0, -3, 2), ConeSpec(0, -2, 3), ConeSpec(0, -3, 3)):
        w = counts(reflect_series(wider, 12, vertex_gf_15), 12)
        assert all(x <= y for x, y in zip(base, w))


def test_root_of_unity_matches(vertex_gf_15):
    for spec in all_specs(6):
        vals = reflect_series_rou(spec, 12, vertex_gf_15)
        assert len(vals) == 13


def test_root_of_unity_detects_mismatch(vertex_gf_15):
    with pytest.raises(ToleranceExceeded):
        reflect_series_rou(ConeSpec(0, -2, 3), 9, vertex_gf_15, rel_tol=1e-18)


def test_rou_includes_cubic_root_of_unity(vertex_gf_15):
    # width 6 puts a primitive cube root of unity among the evaluation
    # points; the polynomial evaluation stays finite and correct there
    vals = reflect_series_rou(ConeSpec(0, -3, 3), 12, vertex_gf_15)
    exact = reflect_series(ConeSpec(0, -3, 3), 12, vertex_gf_15)
    for n in range(13):
        assert abs(vals[n].real - int(exact.coefficient(n).coefficient(0))) < 1e-6


def test_classification():
    assert classify(ConeSpec(0, -1, 1)) is Classification.ALGEBRAIC
    assert classify(ConeSpec(0, -2, 3)) is Classification.ALGEBRAIC
    assert classify(ConeSpec(0, -3, 3)) is Classification.D_FINITE_NOT_ALGEBRAIC


def test_classification_depends_on_width_mod_three():
    for spec in all_specs(9):
        want = Classification.ALGEBRAIC if spec.width % 3 else Classification.D_FINITE_NOT_ALGEBRAIC
        assert classify(spec) is want


def test_cone_asymptotic_exponents():
    c1 = cone_asymptotic(ConeSpec(0, -1, 1))
    assert c1.polynomial_exponent == pytest.approx(-2.5)
    assert c1.growth_base == 3.0
    c2 = cone_asymptotic(ConeSpec(0, -2, 3))
    assert c2.polynomial_exponent == pytest.approx(-1 - 3 / 5)


def test_cone_asymptotic_constant_value():
    # quarter-plane corridor: the constant is 27/(4 sqrt(pi)), matching the
    # Stirling limit of the exact excursion counts 4^m (3m)! / ((m+1)!(2m+1)!)
    c = cone_asymptotic(ConeSpec(0, -1, 1)).constant
    assert c == pytest.approx(27 / (4 * math.sqrt(math.pi)), rel=1e-12)


def test_cone_asymptotic_degenerate():
    with pytest.raises(DegenerateCase):
        cone_asymptotic(ConeSpec(0, -3, 3))


def test_asymptotic_fit_converges_moderate_order(vertex_gf_15):
    # full acceptance runs at n ~ 150; here only the machinery and the
    # direction of convergence at small n
    fit = asymptotic_fit(ConeSpec(0, -1, 1), 15, vertex_gf_15, threshold=1.0, samples=4)
    errs = [r[3] for r in fit.rows]
    assert errs[-1] < errs[0]
