import cmath
import math
import random

import pytest

from kreweras.thetanum import (
    DegenerateAlpha,
    KernelPoint,
    NearPole,
    NoBracket,
    PrecisionUnreachable,
    ThetaContext,
    L_residuals,
    asym_prefactor,
    kernel_point,
    kernel_residual,
    kernel_suite,
    parametric_E_check,
    qhat_expansion_check,
    qhat_of_t,
    solve_tau,
    t_from_tau,
    theta_eval,
    winding_asymptotic_report,
)

PI = math.pi


def test_theta_odd_at_zero():
    assert abs(theta_eval(0, ThetaContext(1j))) < 1e-14


def test_theta_context_validation():
    with pytest.raises(ValueError):
        ThetaContext(0.5)
    with pytest.raises(ValueError):
        theta_eval(0, ThetaContext(1j), deriv=4)


def test_theta_precision_unreachable():
    with pytest.raises(PrecisionUnreachable):
        theta_eval(0.3, ThetaContext(1e-8j, n_max=50), 1)


def test_quasi_periodicity():
    rng = random.Random(2)
    for _ in range(10):
        z = complex(rng.uniform(-1, 1), rng.uniform(-0.4, 0.4))
        tau = complex(rng.uniform(-0.3, 0.3), rng.uniform(0.6, 1.4))
        ctx = ThetaContext(tau)
        th = theta_eval(z, ctx)
        scale = max(1.0, abs(th))
        assert abs(theta_eval(z + PI, ctx) + th) < 1e-10 * scale
        shifted = theta_eval(z + PI * tau, ctx)
        factor = -cmath.exp(-1j * PI * tau - 2j * z)
        assert abs(shifted - factor * th) < 1e-10 * max(1.0, abs(shifted))


def test_theta_tail_insensitive_to_budget():
    ctx1 = ThetaContext(0.9j, n_max=200)
    ctx2 = ThetaContext(0.9j, n_max=400)
    z = 0.3 + 0.2j
    assert theta_eval(z, ctx1, 1) == theta_eval(z, ctx2, 1)


def test_solve_tau_round_trip():
    for t in (0.01, 0.05, 0.1, 0.2, 0.3, 0.32):
        tau = solve_tau(t)
        assert tau.real == 0 and tau.imag > 0
        assert abs(t_from_tau(tau) - t) < 1e-10


def test_solve_tau_rejects_out_of_range():
    with pytest.raises(ValueError):
        solve_tau(0.4)
    with pytest.raises(ValueError):
        solve_tau(0.0)


def test_solve_tau_matches_series_inversion():
    # q(t) from the exact series, evaluated at the solved nome, returns t
    from kreweras.thetaq import q_of_t

    t = 0.1
    tau = solve_tau(t)
    q = cmath.exp(2j * PI * tau).real
    qt = q_of_t(45)
    # t(q) rebuilt by evaluating the series q(t) at t and comparing nomes
    assert abs(qt.evaluate(t) - q) < 1e-10


def test_kernel_residuals():
    for t in (0.05, 0.1, 0.2, 0.3):
        res = kernel_suite(t, samples=100)
        assert res["max_kernel_residual"] < 1e-10
        assert res["max_symmetry_residual"] < 1e-10
        assert res["X_at_0"] < 1e-10
        assert res["Y_at_0"] < 1e-10


def test_kernel_point_near_pole():
    t = 0.2
    tau = solve_tau(t)
    with pytest.raises(NearPole):
        kernel_residual(KernelPoint(t, tau, -PI * tau))  # denominator theta zero
    assert kernel_residual(kernel_point(t, 0.7 + 0.3j)) < 1e-10


def test_L_residuals():
    rep = L_residuals(PI / 2, 0.2)
    assert rep.equation_residual < 1e-8
    assert rep.boundary_series_difference < 1e-6


def test_L_rejects_cubic_root_of_unity():
    with pytest.raises(DegenerateAlpha):
        L_residuals(2 * PI / 3, 0.2)


def test_parametric_E():
    assert parametric_E_check(PI / 2, 0.1) < 1e-8
    assert parametric_E_check(PI / 5, 0.05) < 1e-10


def test_parametric_E_rejects_degenerate_alpha():
    with pytest.raises(DegenerateAlpha):
        parametric_E_check(2 * PI / 3, 0.1)


def test_qhat_expansion():
    rep = qhat_expansion_check()
    assert rep.jacobi_residual < 1e-10
    assert rep.errors[0] < 1e-6 and rep.errors[1] < 1e-6 and rep.errors[2] < 1e-6


def test_qhat_linearisation_near_singularity():
    # qhat ~ (1 - 3t)/9 with a quadratic correction of fixed relative size
    for t in (0.30, 0.32, 0.33):
        qh = qhat_of_t(t)
        delta = 1 - 3 * t
        assert abs(qh - delta / 9) < 0.2 * delta ** 2


def test_asym_prefactor_values():
    const, expo = asym_prefactor(PI / 2)
    assert expo == pytest.approx(-7 / 4)
    # at alpha = pi/2 the constant reduces to -3^(7/2)/(4 Gamma(-3/4)), real
    want = -(3 ** 3.5) / (4 * math.gamma(-0.75))
    assert const.real == pytest.approx(want, rel=1e-12)
    assert abs(const.imag) < 1e-12


def test_asym_prefactor_degenerate():
    for alpha in (0.0, 2 * PI / 3, PI):
        with pytest.raises(DegenerateAlpha):
            asym_prefactor(alpha)


def test_winding_asymptotic_direction(vertex_gf_12):
    rep = winding_asymptotic_report(PI / 2, vertex_gf_12, n_max=12, samples=4)
    assert rep.zero_off_lattice
    errs = [r[3] for r in rep.rows]
    assert errs[-1] < errs[0]
