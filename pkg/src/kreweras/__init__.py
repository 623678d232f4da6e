"""Exact enumeration of Kreweras-lattice walks by length and winding angle.

Closed-form generating functions built from theta-type q-series, an exact
dynamic-programming oracle on the winding cover, reflection-principle counts
for walks confined to angular corridors, and a floating-point validation
layer for the underlying theta-function identities.
"""

__version__ = "0.1.0"

from .series import (
    NegativeTExponent,
    NonExactDivision,
    NonUnitLeadingCoefficient,
    NotInvertible,
    QSeries,
    TSeries,
    WindingPoly,
    qs_invert,
    qs_substitute_t,
    ts_revert,
    wp_exact_div,
)
from .coverwalk import (
    CountTable,
    VerifyReport,
    WedgeState,
    WindowOverflow,
    corridor_series,
    enumerate_walks,
    excursion_series,
    plane_oracle,
    verify_functional_equation,
)
from .thetaq import (
    GFRequest,
    TSpec,
    build_T,
    excursion_gf,
    q_of_t,
    vertex_excursion_gf,
    winding_slice,
)
from .cone import (
    Classification,
    ConeSpec,
    DegenerateCase,
    ToleranceExceeded,
    classify,
    cone_asymptotic,
    reflect_series,
    reflect_series_rou,
)
from .thetanum import (
    DegenerateAlpha,
    KernelPoint,
    NearPole,
    NoBracket,
    PrecisionUnreachable,
    SeriesRadius,
    ThetaContext,
    asym_prefactor,
    kernel_point,
    kernel_residual,
    parametric_E_check,
    qhat_expansion_check,
    solve_tau,
    theta_eval,
)

__all__ = [name for name in dir() if not name.startswith("_")]
