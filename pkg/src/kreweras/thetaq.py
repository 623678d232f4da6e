"""Theta-type series and the exact winding-angle generating functions.

The building block is the family of q-series

    T_k(u, q) = sum_{n>=0} (-1)^n (2n+1)^k q^(n(n+1)/2) (u^(n+1) - (-1)^k u^(-n))

with ``u = s^a * q^(c/3)`` and nome ``q`` or ``q^3``.  All arithmetic is done
on the exponent lattice (1/3)Z, i.e. in integer powers of ``r = q^(1/3)``,
where every exponent that appears is integral.

From these we assemble, exactly:

* ``q_of_t``              -- the series q(t) = t^3 + 15 t^6 + 279 t^9 + ...
* ``excursion_gf``        -- E(t, s), cell-centred excursions by winding
* ``vertex_excursion_gf`` -- E~(t, s), vertex-centred excursions by winding

The coefficient of ``t^n s^k`` counts length-n excursions of winding angle
``2*pi*k/3``; all divisions promised to be exact by the theory are checked at
run time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from .series import (
    QSeries,
    TSeries,
    WindingPoly,
    WP_S,
    ts_revert,
)

# r-units of head-room beyond 3*order: the assembled ratios contain exponents
# down to r^-2 (from u = s * q^(-2/3)) and a handful of inversion shifts.
GUARD = 12

_S_MINUS_1 = WindingPoly.from_dict({1: 1, 0: -1})
_ONE_MINUS_S3 = WindingPoly.from_dict({0: 1, 3: -1})
_S3_MINUS_1 = WindingPoly.from_dict({3: 1, 0: -1})


@dataclass(frozen=True)
class TSpec:
    """Parameters of one T-series: T_k(s^a q^(c/3), q^m) to a given r-order."""

    k: int
    u_s_exp: int
    u_q_exp_thirds: int
    nome_power: int
    truncation_order: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("derivative weight k must be >= 0")
        if self.nome_power not in (1, 3):
            raise ValueError("nome power must be 1 or 3")
        if self.truncation_order < 1:
            raise ValueError("truncation order must be >= 1")


@dataclass(frozen=True)
class GFRequest:
    variant: Literal["cell", "vertex"]
    order: int

    def __post_init__(self) -> None:
        if self.variant not in ("cell", "vertex"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.order < 0:
            raise ValueError("order must be >= 0")


def build_T(spec: TSpec) -> QSeries:
    """Partial sum of the defining series, complete through the truncation order.

    Term ``n`` contributes the monomials

        (-1)^n (2n+1)^k  s^(a(n+1)) r^(3m*n(n+1)/2 + c(n+1))
      - (-1)^n (2n+1)^k (-1)^k s^(-a*n) r^(3m*n(n+1)/2 - c*n)

    whose r-exponents grow quadratically, so the sum below the truncation
    order is finite.
    """
    k, a, c, m, trunc = (
        spec.k,
        spec.u_s_exp,
        spec.u_q_exp_thirds,
        spec.nome_power,
        spec.truncation_order,
    )
    coeffs: dict[int, dict[int, Fraction]] = {}

    def add(exp: int, s_exp: int, val: int) -> None:
        if exp <= trunc:
            d = coeffs.setdefault(exp, {})
            d[s_exp] = d.get(s_exp, 0) + val

    n = 0
    while True:
        base = m * 3 * (n * (n + 1) // 2)
        if n > abs(c) + 2 and base - abs(c) * (n + 1) > trunc:
            break
        sign = -1 if n % 2 else 1
        w = (2 * n + 1) ** k
        add(base + c * (n + 1), a * (n + 1), sign * w)
        add(base - c * n, -a * n, -sign * w * (-1 if k % 2 else 1))
        n += 1
    return QSeries(
        {e: WindingPoly.from_dict(d) for e, d in coeffs.items()}, trunc
    )


# ---------------------------------------------------------------------------
# the length variable as a series in r, and its reversion
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _t_of_r(trunc: int) -> QSeries:
    """t = r * T_1(1,q^3) / (4 T_0(q,q^3) + 6 T_1(q,q^3)) as an r-series."""
    t1 = build_T(TSpec(1, 0, 0, 3, trunc))
    t0q = build_T(TSpec(0, 0, 3, 3, trunc))
    t1q = build_T(TSpec(1, 0, 3, 3, trunc))
    den = t0q.scale(4) + t1q.scale(6)
    return t1.div(den).shift_r(1)


def _qseries_to_tseries(a: QSeries) -> TSeries:
    if a.coeffs and min(a.coeffs) < 0:
        raise ValueError("series has negative exponents")
    return TSeries([a.coeffs.get(e, WindingPoly.zero()) for e in range(a.trunc + 1)], a.trunc)


@lru_cache(maxsize=32)
def _r_of_t(trunc: int) -> TSeries:
    """Reversion of t(r): the series r(t) = t + 5*t^4 + ... used for q -> q(t)."""
    return ts_revert(_qseries_to_tseries(_t_of_r(trunc)))


def q_of_t(order: int) -> TSeries:
    """The unique series with zero constant term inverting t(q); q = r(t)^3."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if order < 3:
        return TSeries.zero(order)
    r = _r_of_t(order)
    return (r * r * r).truncate(order)


# ---------------------------------------------------------------------------
# generating-function assembly
# ---------------------------------------------------------------------------


def _check_counts(gf: TSeries, what: str) -> None:
    # final-output integrality assertion: every winding count is a
    # nonnegative integer even though intermediate arithmetic is rational
    for n in range(gf.trunc + 1):
        for e, cf in gf.coefficient(n).items():
            if cf.denominator != 1 or cf < 0:
                raise ArithmeticError(
                    f"{what}: coefficient of t^{n} s^{e} is {cf}, not a count"
                )


@lru_cache(maxsize=8)
def _excursion_gf_cached(order: int) -> TSeries:
    R = 3 * order + GUARD
    t1_1q3 = build_T(TSpec(1, 0, 0, 3, R))
    t0_qq3 = build_T(TSpec(0, 0, 3, 3, R))
    t1_q2q3 = build_T(TSpec(1, 0, 6, 3, R))
    t1_u = build_T(TSpec(1, 1, -2, 1, R))
    t0_u = build_T(TSpec(0, 1, -2, 1, R))

    b1 = t1_q2q3.div(t1_1q3)
    b2 = (t0_qq3 * t1_u).div(t1_1q3).div(t0_u)
    bracket = QSeries.monomial(0, WP_S, R) - (b1 + b2).shift_r(-1)
    te_q = bracket.exact_div_poly(_ONE_MINUS_S3).scale(WP_S)
    e_q = te_q.div(_t_of_r(R))
    gf = e_q.substitute_t(_r_of_t(R)).truncate(order)
    if not gf.coefficient(0) == WindingPoly.one():
        raise ArithmeticError("excursion series must start with the empty walk")
    _check_counts(gf, "excursion_gf")
    return gf


def excursion_gf(req: GFRequest) -> TSeries:
    """E(t, s): cell-centred excursions counted by length and winding angle."""
    if req.variant != "cell":
        raise ValueError("excursion_gf handles the cell-centred variant")
    return _excursion_gf_cached(req.order)


@lru_cache(maxsize=8)
def _vertex_gf_cached(order: int) -> TSeries:
    R = 3 * order + GUARD
    p = build_T(TSpec(0, 0, 3, 3, R))
    t1_qq3 = build_T(TSpec(1, 0, 3, 3, R))
    t2_qq3 = build_T(TSpec(2, 0, 3, 3, R))
    t1_1q3 = build_T(TSpec(1, 0, 0, 3, R))
    t3_1q3 = build_T(TSpec(3, 0, 0, 3, R))
    t1_1q = build_T(TSpec(1, 0, 0, 1, R))
    t3_1q = build_T(TSpec(3, 0, 0, 1, R))
    v = build_T(TSpec(2, 1, 0, 1, R))
    w = build_T(TSpec(0, 1, 0, 1, R))

    x = t1_qq3.div(p)
    a = (
        x * x
        - t2_qq3.div(p)
        + t3_1q.div(t1_1q).scale(Fraction(1, 6))
        + t3_1q3.div(t1_1q3).scale(Fraction(1, 3))
    )
    # T_0(s,q) = (s-1) * unit: divide the lone non-monomial leading coefficient
    # out, then combine everything over (s-1)(1+s+s^2) = s^3 - 1 so that the
    # only polynomial division left is checked-exact per r-coefficient.
    u = w.exact_div_poly(_S_MINUS_1)
    n1 = a.scale(_S_MINUS_1) - v.div(u).scale(Fraction(1, 2))
    n2 = ((n1 * p) * p).div(t1_1q3).div(t1_1q3)
    te_q = n2.scale(WP_S).exact_div_poly(_S3_MINUS_1).shift_r(-2)
    e_q = te_q.div(_t_of_r(R))
    gf = e_q.substitute_t(_r_of_t(R)).truncate(order)
    if not gf.coefficient(0) == WindingPoly.one():
        raise ArithmeticError("excursion series must start with the empty walk")
    _check_counts(gf, "vertex_excursion_gf")
    return gf


def vertex_excursion_gf(req: GFRequest) -> TSeries:
    """E~(t, s): vertex-centred excursions (origin forbidden) by length and winding."""
    if req.variant != "vertex":
        raise ValueError("vertex_excursion_gf handles the vertex-centred variant")
    return _vertex_gf_cached(req.order)


def winding_slice(gf: TSeries, k: int) -> list[Fraction]:
    """The coefficient sequence of s^k across powers of t."""
    return [gf.coefficient(n).coefficient(k) for n in range(gf.trunc + 1)]
