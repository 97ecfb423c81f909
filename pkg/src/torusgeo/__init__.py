"""Geodesic flows and curvature on extensions of Diff_vol of the flat torus."""

from .curvature import (
    CurvatureReport,
    DegeneratePlaneError,
    curvature_central,
    curvature_diffvol,
    curvature_gauge,
    curvature_gauge_full,
    curvature_general,
    levi_civita_at_identity,
    prop6_closed_form,
    sweep,
)
from .extension import (
    CentralElement,
    GaugeElement,
    MagneticField,
    b_action,
    eta_function,
    flux_check,
    gauge_ad_transpose,
    gauge_bracket,
    gauge_inner,
    h_map,
    k_map,
    l_map,
    lichnerowicz_omega,
)
from .flow import FlowState, SimConfig, integrate, rk4_step
from .spectral import (
    DimensionError,
    FourierScalarField,
    FourierVectorField,
    ad_action,
    ad_transpose,
    covariant_derivative,
    cross_B,
    directional_derivative,
    gradient,
    gradient_project,
    l2_inner,
    leray_project,
    lie_bracket,
)

__version__ = "0.1.0"

__all__ = [
    "CentralElement",
    "CurvatureReport",
    "DegeneratePlaneError",
    "DimensionError",
    "FlowState",
    "FourierScalarField",
    "FourierVectorField",
    "GaugeElement",
    "MagneticField",
    "SimConfig",
    "ad_action",
    "ad_transpose",
    "b_action",
    "covariant_derivative",
    "cross_B",
    "curvature_central",
    "curvature_diffvol",
    "curvature_gauge",
    "curvature_gauge_full",
    "curvature_general",
    "directional_derivative",
    "eta_function",
    "flux_check",
    "gauge_ad_transpose",
    "gauge_bracket",
    "gauge_inner",
    "gradient",
    "gradient_project",
    "h_map",
    "integrate",
    "k_map",
    "l2_inner",
    "l_map",
    "leray_project",
    "levi_civita_at_identity",
    "lichnerowicz_omega",
    "lie_bracket",
    "prop6_closed_form",
    "rk4_step",
    "sweep",
]
