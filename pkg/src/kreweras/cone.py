"""Walks confined to a winding corridor, via the reflection principle.

For integers ``k1 < 0 < k2`` and ``k1 < 2k < k2``, the corridor series counts
vertex-centred excursions whose final winding angle is ``2*pi*k/3`` and whose
winding angle stays strictly inside ``(k1*pi/3, k2*pi/3)`` throughout.  The
primary evaluation is the exact alternating sum of winding slices

    sum_j ( E~_{k + j*D}(t) - E~_{k2 - k + j*D}(t) ),   D = k2 - k1,

which is finite per coefficient because a length-n walk cannot wind more than
n wedge crossings.  A root-of-unity evaluation of the same sum serves as a
floating-point cross-check, and the dominant-singularity constant of the
corridor series is available in closed form for corridors whose width is not
a multiple of pi.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from .series import TSeries, WindingPoly
from .thetaq import GFRequest, vertex_excursion_gf, winding_slice


class ToleranceExceeded(ArithmeticError):
    """Root-of-unity evaluation strayed from the exact translate sum."""


class DegenerateCase(ValueError):
    """Corridor width is a multiple of pi: power-law asymptotics do not apply."""


class Classification(Enum):
    ALGEBRAIC = "Algebraic"
    D_FINITE_NOT_ALGEBRAIC = "DFiniteNotAlgebraic"


@dataclass(frozen=True)
class ConeSpec:
    """Winding corridor (k1*pi/3, k2*pi/3) with endpoint winding 2*pi*k/3."""

    k: int
    k1: int
    k2: int

    def __post_init__(self) -> None:
        if not (self.k1 < 0 < self.k2):
            raise ValueError("need k1 < 0 < k2")
        if not (self.k1 < 2 * self.k < self.k2):
            raise ValueError("need k1 < 2k < k2")

    @property
    def width(self) -> int:
        return self.k2 - self.k1

    @property
    def opening_angle(self) -> float:
        return self.width * math.pi / 3


def _gf(n_max: int, gf: TSeries | None) -> TSeries:
    if gf is None:
        return vertex_excursion_gf(GFRequest("vertex", n_max))
    if gf.trunc < n_max:
        raise ValueError(f"supplied series truncated at {gf.trunc} < {n_max}")
    return gf


def reflect_series(spec: ConeSpec, n_max: int, gf: TSeries | None = None) -> TSeries:
    """Exact corridor-confined excursion counts via the reflection sum.

    ``gf`` may supply a prebuilt vertex generating function (it is built at
    order ``n_max`` otherwise).
    """
    gf = _gf(n_max, gf)
    d = spec.width
    jspan = (n_max + abs(spec.k) + abs(spec.k2)) // d + 2
    slices: dict[int, list[Fraction]] = {}

    def sl(m: int) -> list[Fraction]:
        if m not in slices:
            slices[m] = winding_slice(gf, m) if abs(m) <= n_max else [Fraction(0)] * (n_max + 1)
        return slices[m]

    out = []
    for n in range(n_max + 1):
        acc = Fraction(0)
        for j in range(-jspan, jspan + 1):
            acc += sl(spec.k + j * d)[n] - sl(spec.k2 - spec.k + j * d)[n]
        if acc.denominator != 1 or acc < 0:
            raise ArithmeticError(f"reflection sum gave non-count {acc} at t^{n}")
        out.append(acc)
    return TSeries.from_fractions(out, n_max)


def reflect_series_rou(
    spec: ConeSpec, n_max: int, gf: TSeries | None = None, rel_tol: float = 1e-9
) -> list[complex]:
    """Root-of-unity form of the reflection sum, checked against the exact one.

    Evaluates (1/D) * sum_{j=1}^{D-1} (w^{-jk} - w^{j(k-k1)}) E~(t, w^j) with
    w = exp(2*pi*i/D) on the exact coefficients; raises
    :class:`ToleranceExceeded` if an imaginary residue or a relative mismatch
    against :func:`reflect_series` exceeds ``rel_tol``.
    """
    gf = _gf(n_max, gf)
    exact = reflect_series(spec, n_max, gf)
    d = spec.width
    weights = []
    for j in range(1, d):
        w_minus = cmath.exp(-2j * math.pi * j * spec.k / d)
        w_plus = cmath.exp(2j * math.pi * j * (spec.k - spec.k1) / d)
        weights.append((j, w_minus - w_plus))
    out: list[complex] = []
    for n in range(n_max + 1):
        poly = gf.coefficient(n)
        acc = 0j
        for j, wt in weights:
            acc += wt * poly(cmath.exp(2j * math.pi * j / d))
        val = acc / d
        ref = int(exact.coefficient(n).coefficient(0))
        scale = max(1.0, abs(ref))
        if abs(val.imag) > rel_tol * scale or abs(val.real - ref) > rel_tol * scale:
            raise ToleranceExceeded(
                f"root-of-unity value {val} vs exact {ref} at t^{n} for {spec}"
            )
        out.append(val)
    return out


def classify(spec: ConeSpec) -> Classification:
    """Algebraic exactly when the corridor width is not a multiple of pi."""
    if spec.width % 3 != 0:
        return Classification.ALGEBRAIC
    return Classification.D_FINITE_NOT_ALGEBRAIC


class ConeAsymptotic(NamedTuple):
    constant: float
    polynomial_exponent: float
    growth_base: float


def cone_asymptotic(spec: ConeSpec) -> ConeAsymptotic:
    """Dominant asymptotic term C * n^(-1-3/D) * 3^n of the corridor counts.

    The constant combines the two slowest root-of-unity terms (j = 1 and
    j = D-1) of the reflection sum with the winding-angle coefficient
    asymptotics; the counts vanish off the residue class 3 | n, and the
    constant refers to that class.  Requires 3 to not divide D: at multiples
    the cosine factor vanishes and the Gamma factor has a pole (the series
    acquires a logarithmic singularity instead).
    """
    d = spec.width
    if d % 3 == 0:
        raise DegenerateCase(f"corridor width D={d} is a multiple of 3")
    c = (
        -4
        * 3.0 ** (5 - 6 / d)
        * math.sin(spec.k1 * math.pi / d)
        * math.sin((spec.k1 - 2 * spec.k) * math.pi / d)
        / (d * d * (1 + 2 * math.cos(2 * math.pi / d)) * math.gamma(-3 / d))
    )
    return ConeAsymptotic(c, -1.0 - 3.0 / d, 3.0)


@dataclass(frozen=True)
class AsymptoticFit:
    """Ratio fit of corridor counts against the closed-form asymptotic term."""

    spec: ConeSpec
    rows: tuple[tuple[int, int, float, float], ...]  # (n, count, prediction, rel_err)
    ok: bool = field(default=False)

    @property
    def final_error(self) -> float:
        return self.rows[-1][3]


def asymptotic_fit(
    spec: ConeSpec,
    n_max: int,
    gf: TSeries | None = None,
    threshold: float = 0.10,
    samples: int = 8,
) -> AsymptoticFit:
    """Compare reflect_series coefficients on 3 | n against the asymptotic term.

    Passes when the relative error at the largest computed n is below
    ``threshold`` and decreases over the last three sampled points.
    """
    const, expo, base = cone_asymptotic(spec)
    series = reflect_series(spec, n_max, gf)
    ns = [n for n in range(3, n_max + 1, 3)][-samples:]
    rows = []
    for n in ns:
        count = int(series.coefficient(n).coefficient(0))
        pred = const * n ** expo * base ** n
        rel = abs(count - pred) / abs(pred)
        rows.append((n, count, pred, rel))
    errs = [r[3] for r in rows[-3:]]
    ok = rows[-1][3] < threshold and all(x > y for x, y in zip(errs, errs[1:]))
    return AsymptoticFit(spec, tuple(rows), ok)
