"""Seeded property suites: adjoint relations, cocycle identities, flux quantization.

Each property is evaluated on ``cases`` random inputs drawn from
``numpy.random.default_rng([seed, case])`` so any failing case can be rerun on
its own.  Residuals are relative: ``|lhs - rhs| / max(1, |lhs|, |rhs|, ...)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

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
    flux_check,
    gauge_ad_transpose,
    gauge_bracket,
    gauge_inner,
    h_map,
    k_map,
    l_map,
    lichnerowicz_omega,
)
from .curvature import levi_civita_at_identity
from .random_fields import random_magnetic_field, random_scalar_field, random_vector_field
from .spectral import ad_action, ad_transpose, covariant_derivative, l2_inner, leray_project, lie_bracket

DEFAULT_TOL = 1e-10
SUITES = ("adjoints", "cocycle", "flux")


@dataclass(frozen=True)
class PropertyResult:
    name: str
    max_residual: float
    worst_case: int
    cases: int
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name:<24} {self.max_residual:10.3e}  (tol {self.tol:.0e}, worst case {self.worst_case})  {status}"


def _rel(lhs: float, rhs: float, *extra: float) -> float:
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs), *(abs(e) for e in extra))


def _rel_field(diff, *parts) -> float:
    return diff.max_abs() / max(1.0, *(p.max_abs() for p in parts))


def _vf(rng, n=4):
    return random_vector_field(rng, 3, n, 3)


def _sf(rng, n=4):
    return random_scalar_field(rng, 3, n, 3)


def _ge(rng):
    return GaugeElement(_vf(rng), _sf(rng))


def _ce(rng):
    return CentralElement(_vf(rng), float(rng.uniform(-1, 1)))


# Each property: (rng, B) -> relative residual.


def _ad_adjoint(rng, B):
    x, a, z = _vf(rng), _vf(rng), _vf(rng)
    return _rel(l2_inner(ad_action(x, a), z), l2_inner(a, ad_transpose(x, z)))


def _eq18(rng, B):
    x1, x2, f = _vf(rng), _vf(rng), _sf(rng)
    return _rel(l2_inner(eta_function(x1, x2, B), f), l2_inner(h_map(f, x1, B), x2))


def _eq19(rng, B):
    x, f1, f2 = _vf(rng), _sf(rng), _sf(rng)
    return _rel(l2_inner(b_action(x, f1), f2), l2_inner(l_map(f1, f2), x))


def _k_skew(rng, B):
    x, y = _vf(rng), _vf(rng)
    lhs, rhs = l2_inner(k_map(x, B), y), -l2_inner(x, k_map(y, B))
    return _rel(lhs, rhs)


def _h_skew(rng, B):
    x, y, f = _vf(rng), _vf(rng), _sf(rng)
    return _rel(l2_inner(h_map(f, x, B), y), -l2_inner(x, h_map(f, y, B)))


def _b_skew(rng, B):
    x, f1, f2 = _vf(rng), _sf(rng), _sf(rng)
    return _rel(l2_inner(b_action(x, f1), f2), -l2_inner(f1, b_action(x, f2)))


def _omega_k(rng, B):
    x, y = _vf(rng), _vf(rng)
    return _rel(lichnerowicz_omega(x, y, B), l2_inner(k_map(x, B), y))


def _central_adjoint(rng, B):
    a, c, d = _ce(rng), _ce(rng), _ce(rng)
    return _rel(central_inner(central_bracket(a, c, B), d), central_inner(c, central_ad_transpose(a, d, B)))


def _gauge_adjoint(rng, B):
    a, c, d = _ge(rng), _ge(rng), _ge(rng)
    return _rel(gauge_inner(gauge_bracket(a, c, B), d), gauge_inner(c, gauge_ad_transpose(a, d, B)))


def _levi_civita(rng, B):
    x, y = _vf(rng), _vf(rng)
    lhs, rhs = levi_civita_at_identity(x, y), leray_project(covariant_derivative(x, y))
    return _rel_field(lhs - rhs, lhs, rhs)


def _lichnerowicz_cocycle(rng, B):
    x1, x2, x3 = _vf(rng, 3), _vf(rng, 3), _vf(rng, 3)
    terms = [
        lichnerowicz_omega(ad_action(x1, x2), x3, B),
        lichnerowicz_omega(ad_action(x2, x3), x1, B),
        lichnerowicz_omega(ad_action(x3, x1), x2, B),
    ]
    return _rel(sum(terms), 0.0, *terms)


def _gauge_cocycle(rng, B):
    x1, x2, x3 = _vf(rng, 3), _vf(rng, 3), _vf(rng, 3)
    lhs = eta_function(ad_action(x1, x2), x3, B) + eta_function(ad_action(x2, x3), x1, B) + eta_function(
        ad_action(x3, x1), x2, B
    )
    rhs = b_action(x1, eta_function(x2, x3, B)) + b_action(x2, eta_function(x3, x1, B)) + b_action(
        x3, eta_function(x1, x2, B)
    )
    return _rel_field(lhs - rhs, lhs, rhs)


def _gauge_jacobi(rng, B):
    a, c, d = (GaugeElement(_vf(rng, 3), _sf(rng, 3)) for _ in range(3))
    br = lambda p, q: gauge_bracket(p, q, B)  # noqa: E731
    parts = [br(a, br(c, d)), br(c, br(d, a)), br(d, br(a, c))]
    total = parts[0] + parts[1] + parts[2]
    vec = _rel_field(total.X, *(p.X for p in parts))
    scal = _rel_field(total.f, *(p.f for p in parts))
    return max(vec, scal)


def _bracket_jacobi(rng, B):
    u, v, w = _vf(rng, 3), _vf(rng, 3), _vf(rng, 3)
    parts = [lie_bracket(u, lie_bracket(v, w)), lie_bracket(v, lie_bracket(w, u)), lie_bracket(w, lie_bracket(u, v))]
    return _rel_field(parts[0] + parts[1] + parts[2], *parts)


PROPERTIES: dict[str, dict[str, Callable]] = {
    "adjoints": {
        "ad_transpose_adjoint": _ad_adjoint,
        "h_defining_relation": _eq18,
        "l_defining_relation": _eq19,
        "k_skew": _k_skew,
        "h_skew": _h_skew,
        "b_skew": _b_skew,
        "omega_equals_k_pairing": _omega_k,
        "central_ad_adjoint": _central_adjoint,
        "gauge_ad_adjoint": _gauge_adjoint,
        "levi_civita_identity": _levi_civita,
    },
    "cocycle": {
        "lichnerowicz_cocycle": _lichnerowicz_cocycle,
        "gauge_cocycle": _gauge_cocycle,
        "gauge_jacobi": _gauge_jacobi,
        "bracket_jacobi": _bracket_jacobi,
    },
}


def run_property(
    name: str, fn: Callable, seed: int, cases: int, B: Optional[MagneticField] = None, tol: float = DEFAULT_TOL
) -> PropertyResult:
    worst, worst_case = 0.0, -1
    for case in range(cases):
        rng = np.random.default_rng([seed, case])
        b = B if B is not None else MagneticField(random_magnetic_field(rng))
        r = fn(rng, b)
        if not (r <= worst) or worst_case < 0:
            worst, worst_case = r, case
    return PropertyResult(name, float(worst), worst_case, cases, tol)


def run_suite(
    suite: str, seed: int = 0, cases: int = 50, B: Optional[MagneticField] = None, tol: float = DEFAULT_TOL
) -> list[PropertyResult]:
    if suite == "all":
        return [r for s in SUITES for r in run_suite(s, seed, cases, B, tol)]
    if suite == "flux":
        report = flux_check(B if B is not None else MagneticField.zero())
        residual = max((abs(p - round(p)) for p in report.fluxes), default=0.0)
        return [PropertyResult("flux_quantized", residual, 0, 1, report.tolerance_used)]
    if suite not in PROPERTIES:
        raise ValueError(f"unknown suite {suite!r}")
    return [run_property(name, fn, seed, cases, B, tol) for name, fn in PROPERTIES[suite].items()]
