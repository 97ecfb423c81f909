"""Sectional curvature of right-invariant L^2 metrics on Diff_vol(T^d) and its extensions.

Every evaluation returns a :class:`CurvatureReport` holding the unnormalized
value ``<R(X, Y) Y, X>``, the Gram determinant of the plane and a breakdown of
the individual summands.  All inputs are trigonometric polynomials, so each
term is computed exactly (no truncation).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .extension import (
    CentralElement,
    GaugeElement,
    MagneticField,
    b_action,
    central_ad_transpose,
    central_bracket,
    central_inner,
    eta_function,
    eta_norm_sq,
    gauge_ad_transpose,
    gauge_bracket,
    gauge_inner,
    h_map,
    k_map,
    lichnerowicz_omega,
)
from .spectral import (
    TWO_PI,
    FourierScalarField,
    FourierVectorField,
    ad_action,
    ad_transpose,
    covariant_derivative,
    gradient_project,
    l2_inner,
    single_pair,
)

DEGENERATE_RTOL = 1e-14


class DegeneratePlaneError(ValueError):
    """The two spanning vectors are (numerically) linearly dependent."""


@dataclass(frozen=True)
class CurvatureReport:
    unnormalized: float
    gram: float
    terms: dict = field(default_factory=dict)

    @property
    def sectional(self) -> float:
        return self.unnormalized / self.gram

    def as_dict(self) -> dict:
        return {
            "unnormalized": self.unnormalized,
            "gram": self.gram,
            "sectional": self.sectional,
            "terms": dict(self.terms),
        }


def _gram(xx: float, yy: float, xy: float) -> float:
    g = xx * yy - xy * xy
    if xx <= 0 or yy <= 0 or g <= DEGENERATE_RTOL * xx * yy:
        raise DegeneratePlaneError(f"degenerate plane: gram={g:.3e}, |X|^2={xx:.3e}, |Y|^2={yy:.3e}")
    return g


def _report(terms: dict, gram: float) -> CurvatureReport:
    return CurvatureReport(float(sum(terms.values())), gram, terms)


# ---------------------------------------------------------------------------
# Generic Lie-algebra formula
# ---------------------------------------------------------------------------


def arnold_terms(x, y, ad: Callable, ad_t: Callable, inner: Callable) -> dict:
    """Summands of ``<R(X, Y) Y, X>`` for a right-invariant metric, in terms of ``ad`` and its transpose."""
    adxy = ad(x, y)
    adtxy = ad_t(x, y)
    adtyx = ad_t(y, x)
    s = adtxy + adtyx
    return {
        "sym_transpose": 0.25 * inner(s, s),
        "bracket": -0.75 * inner(adxy, adxy),
        "transpose_xx_yy": -inner(ad_t(x, x), ad_t(y, y)),
        "mixed_x": -0.5 * inner(adtxy, adxy),
        "mixed_y": -0.5 * inner(adtyx, ad(y, x)),
    }


def curvature_general(x, y, B=None) -> CurvatureReport:
    """Curvature from the generic formula on whichever algebra ``x`` and ``y`` belong to.

    Vector fields use ``ad_action``/``ad_transpose`` on ``X_vol``; central and
    gauge elements use the extension brackets with the magnetic field ``B``.
    """
    if isinstance(x, FourierVectorField):
        ad, ad_t, inner = ad_action, ad_transpose, l2_inner
    elif isinstance(x, CentralElement):
        ad = lambda a, c: central_bracket(a, c, B)  # noqa: E731
        ad_t = lambda a, c: central_ad_transpose(a, c, B)  # noqa: E731
        inner = central_inner
    elif isinstance(x, GaugeElement):
        ad = lambda a, c: gauge_bracket(a, c, B)  # noqa: E731
        ad_t = lambda a, c: gauge_ad_transpose(a, c, B)  # noqa: E731
        inner = gauge_inner
    else:
        raise TypeError(f"unsupported algebra element {type(x).__name__}")
    gram = _gram(inner(x, x), inner(y, y), inner(x, y))
    return _report(arnold_terms(x, y, ad, ad_t, inner), gram)


# ---------------------------------------------------------------------------
# Diff_vol of the flat torus
# ---------------------------------------------------------------------------


def _diffvol_terms(x: FourierVectorField, y: FourierVectorField) -> dict:
    qxx = gradient_project(covariant_derivative(x, x))
    qyy = gradient_project(covariant_derivative(y, y))
    qxy = gradient_project(covariant_derivative(x, y))
    # The ambient curvature term of the flat torus is identically zero.
    return {"pressure_xx_yy": l2_inner(qxx, qyy), "pressure_xy": -l2_inner(qxy, qxy)}


def curvature_diffvol(x: FourierVectorField, y: FourierVectorField) -> CurvatureReport:
    """``<Q grad_X X, Q grad_Y Y> - ||Q grad_X Y||^2`` on the flat torus."""
    gram = _gram(l2_inner(x, x), l2_inner(y, y), l2_inner(x, y))
    return _report(_diffvol_terms(x, y), gram)


def levi_civita_at_identity(x: FourierVectorField, y: FourierVectorField) -> FourierVectorField:
    """Levi-Civita derivative of right-invariant fields, from ad and its transpose.

    Equals ``P grad_X Y``.
    """
    return 0.5 * (ad_transpose(x, y) + ad_transpose(y, x) - ad_action(x, y))


# ---------------------------------------------------------------------------
# Extensions
# ---------------------------------------------------------------------------


def _extension_common(x1, a1, x2, a2, B) -> dict:
    z = a1 * x2 - a2 * x1
    terms = {}
    if len(z):
        kz = k_map(z, B)
        terms["k"] = 0.25 * l2_inner(kz, kz)
        terms["nabla_1"] = -lichnerowicz_omega(levi_civita_at_identity(z, x1), x2, B)
        terms["nabla_2"] = lichnerowicz_omega(levi_civita_at_identity(z, x2), x1, B)
    else:
        terms.update(k=0.0, nabla_1=0.0, nabla_2=0.0)
    return terms


def _central_gram(x1, a1, x2, a2) -> float:
    return _gram(l2_inner(x1, x1) + a1 * a1, l2_inner(x2, x2) + a2 * a2, l2_inner(x1, x2) + a1 * a2)


def curvature_central(x1: FourierVectorField, a1: float, x2: FourierVectorField, a2: float, B) -> CurvatureReport:
    """Curvature of the plane ``(X1, a1), (X2, a2)`` in the Lichnerowicz central extension."""
    gram = _central_gram(x1, a1, x2, a2)
    terms = {"base": sum(_diffvol_terms(x1, x2).values())}
    terms["omega_sq"] = -0.75 * lichnerowicz_omega(x1, x2, B) ** 2
    terms.update(_extension_common(x1, a1, x2, a2, B))
    return _report(terms, gram)


def curvature_gauge(x1: FourierVectorField, a1: float, x2: FourierVectorField, a2: float, B) -> CurvatureReport:
    """Curvature of ``(X1, a1), (X2, a2)`` in the gauge extension, with constant fibre parts.

    Differs from :func:`curvature_central` only in the cocycle term, which uses
    ``||eta(X1, X2)||^2`` in place of ``omega(X1, X2)^2``.
    """
    gram = _central_gram(x1, a1, x2, a2)
    terms = {"base": sum(_diffvol_terms(x1, x2).values())}
    terms["eta_sq"] = -0.75 * eta_norm_sq(x1, x2, B)
    terms.update(_extension_common(x1, a1, x2, a2, B))
    return _report(terms, gram)


def curvature_gauge_full(
    x1: FourierVectorField, f1: FourierScalarField, x2: FourierVectorField, f2: FourierScalarField, B
) -> CurvatureReport:
    """Curvature of ``(X1, f1), (X2, f2)`` in the gauge extension with arbitrary fibre functions."""
    gram = _gram(
        l2_inner(x1, x1) + l2_inner(f1, f1),
        l2_inner(x2, x2) + l2_inner(f2, f2),
        l2_inner(x1, x2) + l2_inner(f1, f2),
    )
    eta12 = eta_function(x1, x2, B)
    h21 = h_map(f2, x1, B)
    h12 = h_map(f1, x2, B)
    s = h21 + h12
    terms = {
        "base": sum(_diffvol_terms(x1, x2).values()),
        "b_eta": -l2_inner(b_action(x1, f2) - b_action(x2, f1), eta12),
        "eta_sq": -0.75 * l2_inner(eta12, eta12),
        "h_sym": 0.25 * l2_inner(s, s),
        "h_cross": -l2_inner(h_map(f1, x1, B), h_map(f2, x2, B)),
        "nabla_12": l2_inner(eta_function(x1, levi_civita_at_identity(x1, x2), B), f2),
        "nabla_21": l2_inner(eta_function(x2, levi_civita_at_identity(x2, x1), B), f1),
        "nabla_11": -l2_inner(eta_function(x2, levi_civita_at_identity(x1, x1), B), f2),
        "nabla_22": -l2_inner(eta_function(x1, levi_civita_at_identity(x2, x2), B), f1),
    }
    return _report(terms, gram)


# ---------------------------------------------------------------------------
# Single-mode planes with constant B
# ---------------------------------------------------------------------------

CENTRAL_THRESHOLD = 1.0 / (6.0 * TWO_PI**3)
GAUGE_THRESHOLD = 1.0 / 9.0
THRESHOLD_RTOL = 1e-12


@dataclass(frozen=True)
class ClosedForm:
    value: float
    threshold: float
    positive: bool


def _check_single_mode_frame(p, u_p, v_p, tol: float = 1e-12) -> None:
    p, u_p, v_p = (np.asarray(a, dtype=float) for a in (p, u_p, v_p))
    scale = max(1.0, np.linalg.norm(p)) * max(1.0, np.linalg.norm(u_p), np.linalg.norm(v_p))
    for name, val in (("p.u_p", p @ u_p), ("p.v_p", p @ v_p), ("u_p.v_p", u_p @ v_p)):
        if abs(val) > tol * scale**2:
            raise ValueError(f"{name} = {val:.3e}: p, u_p, v_p must be mutually orthogonal")
    if not np.any(p):
        raise ValueError("p must be a non-zero wave vector")


def prop6_closed_form(p, u_p, v_p, B0, setting: str = "central") -> ClosedForm:
    """Closed-form curvature of the plane ``(U_p, 1), (V_p, 0)`` for constant ``B0``.

    ``a1`` is the component of ``B0`` along ``p / |p|``.  Central extension:
    ``(2pi)^3/2 a1^2 |v_p|^2 (1 - 6 (2pi)^3 |u_p|^2)``; gauge extension:
    ``(2pi)^3/2 a1^2 |v_p|^2 (1 - 9 |u_p|^2)``.
    """
    _check_single_mode_frame(p, u_p, v_p)
    p, u_p, v_p, B0 = (np.asarray(a, dtype=float) for a in (p, u_p, v_p, B0))
    a1 = B0 @ p / np.linalg.norm(p)
    u2, v2 = u_p @ u_p, v_p @ v_p
    prefactor = 0.5 * TWO_PI**3 * a1 * a1 * v2
    if setting == "central":
        value, threshold = prefactor * (1.0 - 6.0 * TWO_PI**3 * u2), CENTRAL_THRESHOLD
    elif setting == "gauge":
        value, threshold = prefactor * (1.0 - 9.0 * u2), GAUGE_THRESHOLD
    else:
        raise ValueError(f"unknown setting {setting!r}")
    # |u_p|^2 within rounding of the threshold counts as the boundary (zero curvature).
    positive = a1 != 0 and v2 > 0 and u2 < threshold * (1.0 - THRESHOLD_RTOL)
    return ClosedForm(float(value), threshold, bool(positive))


def prop6_plane(p, u_p, v_p) -> tuple[FourierVectorField, FourierVectorField]:
    """``U_p``, ``V_p`` single-pair fields with the given real amplitudes."""
    _check_single_mode_frame(p, u_p, v_p)
    return single_pair(p, u_p), single_pair(p, v_p)


def prop6_numeric(p, u_p, v_p, B0, setting: str = "central") -> CurvatureReport:
    if setting not in ("central", "gauge"):
        raise ValueError(f"unknown setting {setting!r}")
    U, V = prop6_plane(p, u_p, v_p)
    fn = curvature_central if setting == "central" else curvature_gauge
    return fn(U, 1.0, V, 0.0, MagneticField.constant(B0))


def relative_difference(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


@dataclass(frozen=True)
class SweepRow:
    param: float
    value_numeric: float
    value_closed_form: float
    rel_diff: float
    positive: bool
    error: str = ""


def sweep(
    u_sq: Iterable[float],
    *,
    p: Sequence[int] = (0, 0, 1),
    u_dir: Sequence[float] = (1.0, 0.0, 0.0),
    v_p: Sequence[float] = (0.0, 1.0, 0.0),
    B0: Sequence[float] = (0.0, 0.0, 1.0),
    setting: str = "central",
) -> list[SweepRow]:
    """Evaluate the single-mode plane for each ``|u_p|^2`` along ``u_dir``.

    Each row carries the numerically evaluated unnormalized curvature, the
    closed form and their relative difference.  Degenerate planes are recorded
    in ``error`` and do not abort the sweep.
    """
    u_dir = np.asarray(u_dir, dtype=float)
    u_dir = u_dir / np.linalg.norm(u_dir)
    rows = []
    for s in u_sq:
        u_p = np.sqrt(s) * u_dir
        closed = prop6_closed_form(p, u_p, v_p, B0, setting)
        try:
            num = prop6_numeric(p, u_p, v_p, B0, setting).unnormalized
        except DegeneratePlaneError as exc:
            rows.append(SweepRow(float(s), float("nan"), closed.value, float("nan"), False, str(exc)))
            continue
        rows.append(SweepRow(float(s), num, closed.value, relative_difference(num, closed.value), num > 0))
    return rows


def sweep_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["param", "value_numeric", "value_closed_form", "rel_diff", "positive"])
    for r in rows:
        w.writerow([repr(r.param), repr(r.value_numeric), repr(r.value_closed_form), repr(r.rel_diff), str(r.positive).lower()])
    return buf.getvalue()


def sign_changes(rows: Sequence[SweepRow]) -> list[tuple[float, float]]:
    """Grid cells ``(param_i, param_{i+1})`` across which the numeric value changes sign."""
    out = []
    for a, b in zip(rows, rows[1:]):
        if np.sign(a.value_numeric) != np.sign(b.value_numeric):
            out.append((a.param, b.param))
    return out
