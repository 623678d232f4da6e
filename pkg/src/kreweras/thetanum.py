"""Floating-point validation layer: theta functions, the kernel
parameterisation, boundary-series identities, and coefficient asymptotics.

The odd theta function used throughout is

    theta(z, tau) = sum_{n in Z} (-1)^n exp(((2n+1)/2)^2 i pi tau + (2n+1) i z)

with derivatives taken in ``z``.  Truncated T-type series relate to it by

    theta^(k)(z, tau) = exp((pi*tau/2 - 2z) i / 2) * i^k * T_k(e^{2iz}, e^{2 i pi tau})

(the constant in the exponent is pi*tau/2, not pi*tau: each summand carries
q^(n(n+1)/2 + 1/8) with q = e^{2 i pi tau}, and the 1/8 contributes
e^{i pi tau / 4}).

Everything here is double precision with adaptive truncation of the theta
sums; the quadratic decay of the summands keeps tails far below the 1e-10
residual targets for the moduli that arise from |t| < 1/3.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .coverwalk import boundary_series
from .thetaq import GFRequest, excursion_gf, vertex_excursion_gf, winding_slice

PI = math.pi


class PrecisionUnreachable(ArithmeticError):
    """Theta tail bound not met within the term budget."""


class NoBracket(ArithmeticError):
    """The nome search interval does not bracket the requested t."""


class NearPole(ArithmeticError):
    """Evaluation too close to a theta zero for a reliable quotient."""


class SeriesRadius(ArithmeticError):
    """|X(z)| too large for the truncated boundary series to certify agreement."""


class DegenerateAlpha(ValueError):
    """alpha in {0, 2*pi/3}: logarithmic regime, the power-law form is invalid."""


@dataclass(frozen=True)
class ThetaContext:
    """Evaluation parameters: tau in the upper half plane, a term budget and a
    tail target (absolute, relative to the largest summand)."""

    tau: complex
    n_max: int = 400
    target: float = 1e-15

    def __post_init__(self) -> None:
        if not complex(self.tau).imag > 0:
            raise ValueError("tau must have positive imaginary part")


def theta_eval(z: complex, ctx: ThetaContext, deriv: int = 0) -> complex:
    """The theta sum or its z-derivative of order ``deriv`` in {0, 1, 2, 3}."""
    if deriv not in (0, 1, 2, 3):
        raise ValueError("deriv must be in {0, 1, 2, 3}")
    tau = complex(ctx.tau)
    total = 0.0 + 0.0j
    biggest = 0.0
    m = 0
    quiet = 0
    while True:
        mag = 0.0
        for mm in (m, -m - 1):
            c = 2 * mm + 1
            term = (-1) ** (mm & 1) * (c * 1j) ** deriv * cmath.exp(
                1j * PI * tau * c * c / 4 + c * 1j * z
            )
            total += term
            mag = max(mag, abs(term))
        biggest = max(biggest, mag)
        quiet = quiet + 1 if mag <= ctx.target * max(1.0, biggest) else 0
        if quiet >= 2 and m >= 3:
            return total
        m += 1
        if m > ctx.n_max:
            raise PrecisionUnreachable(
                f"theta tail above {ctx.target} after {ctx.n_max} terms (tau={tau})"
            )


def t_from_tau(tau: complex) -> complex:
    """The kernel parameterisation of the length variable:
    t = e^{-pi tau i/3} theta'(0,3tau) / (4i theta(pi tau,3tau) + 6 theta'(pi tau,3tau))."""
    ctx = ThetaContext(3 * tau)
    num = theta_eval(0, ctx, 1)
    den = 4j * theta_eval(PI * tau, ctx) + 6 * theta_eval(PI * tau, ctx, 1)
    return cmath.exp(-PI * tau * 1j / 3) * num / den


_Q_LO = 1e-9
_Q_HI = 0.85


def _t_of_nome(q: float) -> float:
    val = t_from_tau(1j * (-math.log(q) / (2 * PI)))
    return val.real


@lru_cache(maxsize=1)
def _check_monotone() -> bool:
    # the bisection below assumes t(q) increases on the search interval;
    # asserted on a grid once per process rather than taken on faith
    grid = [_Q_LO * (_Q_HI / _Q_LO) ** (i / 24) for i in range(25)]
    vals = [_t_of_nome(q) for q in grid]
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ArithmeticError("t(q) not monotone on the nome search interval")
    return True


def solve_tau(t: float) -> complex:
    """Purely imaginary tau with t(tau) = t, by bisection in the real nome."""
    if not 0 < t < 1 / 3:
        raise ValueError("need 0 < t < 1/3")
    _check_monotone()
    lo, hi = _Q_LO, _Q_HI
    if not _t_of_nome(lo) < t < _t_of_nome(hi):
        raise NoBracket(f"t={t} outside [{_t_of_nome(lo)}, {_t_of_nome(hi)}]")
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if _t_of_nome(mid) < t:
            lo = mid
        else:
            hi = mid
    q = 0.5 * (lo + hi)
    tau = 1j * (-math.log(q) / (2 * PI))
    if abs(t_from_tau(tau) - t) > 1e-12:
        raise NoBracket(f"bisection residual too large at t={t}")
    return tau


@dataclass(frozen=True)
class KernelPoint:
    """A sample of the kernel parameterisation: t in (0, 1/3), its imaginary
    tau, and the evaluation point z."""

    t: float
    tau: complex
    z: complex

    def __post_init__(self) -> None:
        if not 0 < abs(self.t) < 1 / 3:
            raise ValueError("need |t| < 1/3")


def kernel_point(t: float, z: complex) -> KernelPoint:
    return KernelPoint(t, solve_tau(t), z)


_POLE_TOL = 1e-6


def _X(z: complex, tau: complex) -> complex:
    ctx = ThetaContext(3 * tau)
    th = lambda w: theta_eval(w, ctx)
    scale = abs(theta_eval(0, ctx, 1))
    d1 = th(z + PI * tau)
    d2 = th(z - 2 * PI * tau)
    if min(abs(d1), abs(d2)) < _POLE_TOL * scale:
        raise NearPole(f"theta zero in the denominator of X at z={z}")
    return cmath.exp(-4 * PI * tau * 1j / 3) * th(z) * th(z - PI * tau) / (d1 * d2)


def kernel_residual(p: KernelPoint) -> float:
    """|K(X(z), Y(z))| with K(x,y) = 1 - t x y - t/x - t/y; exactly zero in
    theory for every z."""
    x = _X(p.z, p.tau)
    y = _X(p.z + PI * p.tau, p.tau)
    if min(abs(x), abs(y)) < _POLE_TOL:
        raise NearPole(f"X or Y vanishes at z={p.z}")
    return abs(1 - p.t * x * y - p.t / x - p.t / y)


def kernel_suite(t: float, samples: int = 100, seed: int = 0) -> dict[str, float]:
    """Random-sample residuals for the kernel parameterisation at one t."""
    tau = solve_tau(t)
    rng = random.Random(seed)
    ytop = (PI * tau).imag
    worst = 0.0
    sym = 0.0
    done = 0
    while done < samples:
        z = complex(rng.uniform(0.1, PI - 0.1), rng.uniform(0.05, 0.95) * ytop)
        try:
            worst = max(worst, kernel_residual(KernelPoint(t, tau, z)))
            sym = max(sym, abs(_X(z, tau) - _X(PI * tau - z, tau)))
        except NearPole:
            continue
        done += 1
    x0 = abs(_X(0j, tau))
    y0 = abs(_X(PI * tau, tau))  # Y(0) = X(pi tau)
    return {
        "max_kernel_residual": worst,
        "max_symmetry_residual": sym,
        "X_at_0": x0,
        "Y_at_0": y0,
    }


# ---------------------------------------------------------------------------
# the boundary function L(z)
# ---------------------------------------------------------------------------


def _L_closed(z: complex, alpha: float, tau: complex) -> complex:
    s = cmath.exp(1j * alpha)
    ctx1 = ThetaContext(tau)
    ctx3 = ThetaContext(3 * tau)
    a = (
        s ** 3 + s ** 2 / _X(z, tau) + s * _X(z - PI * tau, tau)
    ) / (1 - s ** 3)
    pref = (
        cmath.exp(1j * alpha + 5j * PI * tau / 3)
        * theta_eval(PI * tau, ctx3)
        * theta_eval(0, ctx1, 1)
        / (
            (1 - s ** 3)
            * theta_eval(alpha / 2 - 2 * PI * tau / 3, ctx1)
            * theta_eval(0, ctx3, 1)
        )
    )
    b = (
        pref
        * theta_eval(z - 2 * PI * tau, ctx3)
        * theta_eval(z - alpha / 2 + 2 * PI * tau / 3, ctx1)
        / (theta_eval(z, ctx1) * theta_eval(z, ctx3))
    )
    return a + b


def _check_alpha(alpha: float) -> None:
    if min(abs(alpha % (2 * PI / 3)), 2 * PI / 3 - (alpha % (2 * PI / 3))) < 1e-9:
        raise DegenerateAlpha(f"alpha={alpha} makes 1 - e^{{3 i alpha}} vanish")


@dataclass(frozen=True)
class LReport:
    alpha: float
    t: float
    equation_residual: float          # worst |1 + L(z) - L(z + pi tau)/(s X(z))|
    boundary_series_difference: float  # worst |closed form - t,s,x series form|
    samples: int
    series_order: int


def L_residuals(
    alpha: float,
    t: float,
    n_samples: int = 20,
    seed: int = 1,
    dp_order: int = 30,
    x_max: float = 0.15,
) -> LReport:
    """Check the closed form of L(z) two ways.

    (i) the functional-equation residual 1 + L(z) - L(z+pi*tau)/(s X(z)) at
    random z; (ii) agreement with L built from its definition
    ``s t G(0, X(z)) - (t/Y(z)) G(X(z), 0)`` using the exact boundary count
    series truncated at ``dp_order``, at points where |X(z)| is small.
    """
    _check_alpha(alpha)
    tau = solve_tau(t)
    s = cmath.exp(1j * alpha)
    rng = random.Random(seed)
    ytop = (PI * tau).imag
    worst_eq = 0.0
    done = 0
    while done < n_samples:
        z = complex(rng.uniform(0.1, PI - 0.1), rng.uniform(0.05, 0.9) * ytop)
        try:
            resid = abs(
                1 + _L_closed(z, alpha, tau) - _L_closed(z + PI * tau, alpha, tau) / (s * _X(z, tau))
            )
        except NearPole:
            continue
        worst_eq = max(worst_eq, resid)
        done += 1

    tail = (3 * t) ** (dp_order + 1) / (1 - 3 * t)
    if tail > 1e-6:
        raise SeriesRadius(f"boundary series order {dp_order} too low at t={t}")
    g0x, gx0 = boundary_series("cell", dp_order)

    def eval_wall(table, x: complex) -> complex:
        acc = 0j
        tp = 1.0 + 0j
        for n in range(dp_order + 1):
            layer = table[n]
            for k, row in layer.items():
                sk = s ** k
                for bexp, cnt in row.items():
                    acc += tp * sk * cnt * x ** bexp
            tp *= t
        return acc

    worst_defn = 0.0
    used = 0
    for sigma in np.linspace(0.03, 0.8, 40):
        try:
            x = _X(complex(sigma, 0.0), tau)
            y = _X(complex(sigma, 0.0) + PI * tau, tau)
        except NearPole:
            continue
        if not 1e-3 < abs(x) <= x_max:
            continue
        l_def = s * t * eval_wall(g0x, x) - t / y * eval_wall(gx0, x)
        worst_defn = max(worst_defn, abs(l_def - _L_closed(complex(sigma, 0.0), alpha, tau)))
        used += 1
    if used == 0:
        raise SeriesRadius("no sample points with |X(z)| inside the certified radius")
    return LReport(alpha, t, worst_eq, worst_defn, n_samples, dp_order)


def parametric_E_check(alpha: float, t: float, series_order: int | None = None) -> float:
    """|parametric theta expression for E(t, e^{i alpha}) - exact series value|.

    The exact side sums the winding-count series; its truncation order is
    chosen so the geometric tail (3t)^(N+1)/(1-3t) sits below 1e-10.
    """
    _check_alpha(alpha)
    tau = solve_tau(t)
    if series_order is None:
        series_order = 12
        while (3 * t) ** (series_order + 1) / (1 - 3 * t) > 1e-11:
            series_order += 1
    ctx3 = ThetaContext(3 * tau)
    ctx1 = ThetaContext(tau)
    s = cmath.exp(1j * alpha)
    expr = (
        s
        / (t * (1 - s ** 3))
        * (
            s
            - cmath.exp(4 * PI * tau * 1j / 3)
            * theta_eval(2 * PI * tau, ctx3, 1)
            / theta_eval(0, ctx3, 1)
            - cmath.exp(PI * tau * 1j / 3)
            * theta_eval(PI * tau, ctx3)
            * theta_eval(alpha / 2 - 2 * PI * tau / 3, ctx1, 1)
            / (theta_eval(0, ctx3, 1) * theta_eval(alpha / 2 - 2 * PI * tau / 3, ctx1))
        )
    )
    gf = excursion_gf(GFRequest("cell", series_order))
    return abs(expr - gf.evaluate(t, s))


# ---------------------------------------------------------------------------
# Jacobi transform and the expansion around t = 1/3
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QhatReport:
    jacobi_residual: float
    fitted: tuple[float, float, float]
    errors: tuple[float, float, float]

    @property
    def ok(self) -> bool:
        return self.jacobi_residual < 1e-10 and max(self.errors) < 1e-6


def qhat_expansion_check(samples: int = 12, seed: int = 3) -> QhatReport:
    """Jacobi identity residuals plus the expansion of t around the dominant
    singularity: t = 1/3 - 3 qhat + 18 qhat^2 + O(qhat^3).

    The expansion coefficients are extracted by averaging
    t(qhat) = theta'(0, tauhat) / (6 theta'(pi/3, tauhat)) over a small
    circle of qhat values (an exact Cauchy-coefficient quadrature up to the
    aliasing of far higher orders).
    """
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(samples):
        z = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.3, 0.3))
        tau = complex(rng.uniform(-0.3, 0.3), rng.uniform(0.7, 1.6))
        lhs = theta_eval(z, ThetaContext(tau))
        rhs = (
            1j
            * (-1j * tau) ** -0.5
            * cmath.exp(-1j * z * z / (PI * tau))
            * theta_eval(z / tau, ThetaContext(-1 / tau))
        )
        worst = max(worst, abs(lhs - rhs))

    rho, m_pts = 0.05, 32
    vals = []
    for jj in range(m_pts):
        qh = rho * cmath.exp(2j * PI * jj / m_pts)
        tauh = cmath.log(qh) / (2j * PI)
        ctx = ThetaContext(tauh)
        vals.append(theta_eval(0, ctx, 1) / (6 * theta_eval(PI / 3, ctx, 1)))
    hat = np.fft.fft(np.array(vals)) / m_pts
    fitted = tuple((hat[m] / rho ** m).real for m in range(3))
    errors = (abs(fitted[0] - 1 / 3), abs(fitted[1] + 3), abs(fitted[2] - 18))
    return QhatReport(worst, fitted, errors)


def qhat_of_t(t: float) -> float:
    """The nome after the Jacobi transform, qhat = e^{2 pi i tauhat} with
    tauhat = -1/(3 tau); real for real t."""
    tau = solve_tau(t)
    return cmath.exp(2j * PI * (-1 / (3 * tau))).real


# ---------------------------------------------------------------------------
# winding-angle coefficient asymptotics
# ---------------------------------------------------------------------------


def asym_prefactor(alpha: float) -> tuple[complex, float]:
    """Constant and polynomial exponent of the large-n coefficient law

        v_n ~ C * n^(-3 alpha/(2 pi) - 1) * 3^n      (3 | n)

    for the vertex-centred series evaluated at s = e^{i alpha}.
    """
    if not 0 < alpha < PI or abs(alpha - 2 * PI / 3) < 1e-12:
        raise DegenerateAlpha(f"alpha={alpha} outside (0, pi) \\ {{2 pi/3}}")
    s = cmath.exp(1j * alpha)
    const = -(
        3 ** (5 - 3 * alpha / PI) * s * alpha
    ) / (2 * PI * (1 + s + s * s) * math.gamma(-3 * alpha / (2 * PI)))
    return const, -3 * alpha / (2 * PI) - 1


@dataclass(frozen=True)
class AsymptoticReport:
    alpha: float
    rows: tuple[tuple[int, complex, complex, float], ...]  # (n, value, prediction, rel err)
    zero_off_lattice: bool = field(default=True)

    @property
    def final_error(self) -> float:
        return self.rows[-1][3]

    @property
    def decreasing(self) -> bool:
        errs = [r[3] for r in self.rows[-3:]]
        return all(x > y for x, y in zip(errs, errs[1:]))


def winding_asymptotic_report(alpha: float, gf=None, n_max: int = 150, samples: int = 8) -> AsymptoticReport:
    """Compare exact v_n = sum_k c_{n,k} e^{i k alpha} with the power law."""
    const, expo = asym_prefactor(alpha)
    if gf is None:
        gf = vertex_excursion_gf(GFRequest("vertex", n_max))
    zero_off = True
    for n in range(min(n_max, gf.trunc) + 1):
        if n % 3 and not gf.coefficient(n).is_zero:
            zero_off = False
    s = cmath.exp(1j * alpha)
    ns = [n for n in range(3, min(n_max, gf.trunc) + 1, 3)][-samples:]
    rows = []
    for n in ns:
        val = gf.coefficient(n)(s)
        pred = const * n ** expo * 3.0 ** n
        rows.append((n, val, pred, abs(val - pred) / abs(pred)))
    return AsymptoticReport(alpha, tuple(rows), zero_off)
