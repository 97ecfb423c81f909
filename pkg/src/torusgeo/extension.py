"""Extensions of the algebra of divergence-free fields on T^3 by a magnetic field.

Two extensions are modelled:

* the one-dimensional central extension by the Lichnerowicz cocycle
  ``omega(X, Y) = int eta(X, Y)``, with elements :class:`CentralElement`;
* the gauge extension by ``C^oo(T^3)`` (invariant divergence-free fields on a
  principal circle bundle), with elements :class:`GaugeElement`.

The closed two-form is ``eta = -i_B mu`` so that ``eta(X, Y) = (X x B) . Y``
pointwise; with this sign ``omega(X, Y) = <k(X), Y>`` for ``k(X) = P(X x B)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .spectral import (
    TWO_PI,
    DimensionError,
    FourierScalarField,
    FourierVectorField,
    ad_action,
    ad_transpose,
    cross_B,
    directional_derivative,
    dot,
    gradient,
    l2_inner,
    leray_project,
    multiply,
)


@dataclass(frozen=True)
class MagneticField:
    """Divergence-free magnetic field ``B`` on T^3."""

    B: FourierVectorField

    def __post_init__(self):
        if self.B.dim != 3:
            raise DimensionError("magnetic fields live on T^3")
        if not self.B.is_divergence_free(1e-12):
            raise ValueError("magnetic field must be divergence-free")
        if not self.B.is_real(1e-12):
            raise ValueError("magnetic field must be real")

    @classmethod
    def constant(cls, b: Sequence[float]) -> "MagneticField":
        return cls(FourierVectorField.constant(np.asarray(b, dtype=float), 3))

    @classmethod
    def zero(cls) -> "MagneticField":
        return cls(FourierVectorField.zero(3))

    @property
    def constant_only(self) -> bool:
        return bool(np.all(self.B.modes == 0))

    @property
    def mean(self) -> np.ndarray:
        return self.B.coeff((0, 0, 0)).real


def _as_field(B) -> FourierVectorField:
    return B.B if isinstance(B, MagneticField) else B


# ---------------------------------------------------------------------------
# Algebra elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CentralElement:
    """``(X, a)`` in the central extension ``X_vol(T^3) + R``."""

    X: FourierVectorField
    a: float = 0.0

    def __add__(self, other: "CentralElement") -> "CentralElement":
        return CentralElement(self.X + other.X, self.a + other.a)

    def __sub__(self, other: "CentralElement") -> "CentralElement":
        return CentralElement(self.X - other.X, self.a - other.a)

    def __neg__(self) -> "CentralElement":
        return CentralElement(-self.X, -self.a)

    def __mul__(self, s: float) -> "CentralElement":
        return CentralElement(s * self.X, s * self.a)

    __rmul__ = __mul__


@dataclass(frozen=True)
class GaugeElement:
    """``(X, f)`` in ``X_vol(T^3) + C^oo(T^3)``, the identification of the invariant fields on the bundle."""

    X: FourierVectorField
    f: FourierScalarField = field(default_factory=lambda: FourierScalarField.zero(3))

    def __add__(self, other: "GaugeElement") -> "GaugeElement":
        return GaugeElement(self.X + other.X, self.f + other.f)

    def __sub__(self, other: "GaugeElement") -> "GaugeElement":
        return GaugeElement(self.X - other.X, self.f - other.f)

    def __neg__(self) -> "GaugeElement":
        return GaugeElement(-self.X, -self.f)

    def __mul__(self, s: float) -> "GaugeElement":
        return GaugeElement(s * self.X, s * self.f)

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# Structure maps
# ---------------------------------------------------------------------------


def eta_function(X: FourierVectorField, Y: FourierVectorField, B) -> FourierScalarField:
    """The scalar field ``eta(X, Y) = (X x B) . Y``; the gauge cocycle."""
    return dot(cross_B(X, _as_field(B)), Y)


def lichnerowicz_omega(X: FourierVectorField, Y: FourierVectorField, B) -> float:
    """Central cocycle ``omega(X, Y) = int eta(X, Y) mu``.

    Evaluated as ``(2pi)^3`` times the zero mode of ``eta(X, Y)``, i.e. the sum
    of ``-det(B_k, X_l, Y_m)`` over index triples with ``k + l + m = 0``.
    """
    return float(TWO_PI**3 * eta_function(X, Y, B).coeff((0, 0, 0)).real)


def eta_norm_sq(X: FourierVectorField, Y: FourierVectorField, B) -> float:
    """``||eta(X, Y)||^2 = int eta(X, Y)^2 mu``."""
    e = eta_function(X, Y, B)
    return l2_inner(e, e)


def k_map(X: FourierVectorField, B) -> FourierVectorField:
    """``k(X) = P(X x B)``; skew-adjoint and ``omega(X, Y) = <k(X), Y>``."""
    return leray_project(cross_B(X, _as_field(B)))


def h_map(f: FourierScalarField, X: FourierVectorField, B) -> FourierVectorField:
    """``h(f) X = P(f X x B)``; for fixed ``f`` a skew-adjoint operator on divergence-free fields."""
    return leray_project(cross_B(multiply(f, X), _as_field(B)))


def l_map(f1: FourierScalarField, f2: FourierScalarField) -> FourierVectorField:
    """``l(f1, f2) = P(f1 grad f2)``, defined by ``<b(X) f1, f2> = <l(f1, f2), X>``."""
    return leray_project(multiply(f1, gradient(f2)))


def b_action(X: FourierVectorField, f: FourierScalarField) -> FourierScalarField:
    """``b(X) f = -df.X``, minus the derivation action of ``X`` on functions."""
    return -directional_derivative(f, X)


# ---------------------------------------------------------------------------
# Central extension
# ---------------------------------------------------------------------------


def central_inner(A: CentralElement, C: CentralElement) -> float:
    return l2_inner(A.X, C.X) + A.a * C.a


def central_bracket(A: CentralElement, C: CentralElement, B) -> CentralElement:
    """``[(X1, a1), (X2, a2)] = ([X1, X2], omega(X1, X2))`` with ``[., .] = ad_action``."""
    return CentralElement(ad_action(A.X, C.X), lichnerowicz_omega(A.X, C.X, B))


def central_ad_transpose(A: CentralElement, C: CentralElement, B) -> CentralElement:
    """Transpose of ``central_bracket(A, .)``: ``(ad(X1)^T X2 + a2 k(X1), 0)``."""
    vec = ad_transpose(A.X, C.X)
    if C.a != 0:
        vec = vec + C.a * k_map(A.X, B)
    return CentralElement(vec, 0.0)


# ---------------------------------------------------------------------------
# Gauge extension
# ---------------------------------------------------------------------------


def gauge_inner(A: GaugeElement, C: GaugeElement) -> float:
    """Block-diagonal L^2 inner product ``<X1, X2> + <f1, f2>``."""
    return l2_inner(A.X, C.X) + l2_inner(A.f, C.f)


def gauge_bracket(A: GaugeElement, C: GaugeElement, B) -> GaugeElement:
    """Bracket of the gauge extension (abelian fibre algebra).

    ``([X1, X2], b(X1) f2 - b(X2) f1 + eta(X1, X2))`` with ``[., .] = ad_action``;
    the adjoint action of this algebra is ``gauge_bracket(A, .)`` itself.
    """
    vec = ad_action(A.X, C.X)
    scal = b_action(A.X, C.f) - b_action(C.X, A.f) + eta_function(A.X, C.X, B)
    return GaugeElement(vec, scal)


def gauge_ad_transpose(A: GaugeElement, C: GaugeElement, B) -> GaugeElement:
    """Transpose of ``gauge_bracket(A, .)``.

    Vector part ``ad(X1)^T X2 + h(f2) X1 - l(f1, f2)``, scalar part
    ``b(X1)^T f2 = -b(X1) f2``.
    """
    vec = ad_transpose(A.X, C.X) + h_map(C.f, A.X, B) - l_map(A.f, C.f)
    return GaugeElement(vec, -b_action(A.X, C.f))


# ---------------------------------------------------------------------------
# Flux quantization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FluxReport:
    fluxes: tuple
    quantized: bool
    tolerance_used: float

    def as_dict(self) -> Mapping:
        return {"fluxes": list(self.fluxes), "quantized": self.quantized, "tolerance_used": self.tolerance_used}


def flux_check(B, tol: float = 1e-9) -> FluxReport:
    """Fluxes of ``B`` through the three coordinate 2-tori and their integrality.

    Oscillating modes integrate to zero over a coordinate torus, so only the
    mean of ``B`` contributes: flux_i = (2pi)^2 B0_i.
    """
    b = _as_field(B)
    if b.dim != 3:
        raise DimensionError("flux check needs a field on T^3")
    mean = b.coeff((0, 0, 0)).real
    fluxes = tuple(float(TWO_PI**2 * c) for c in mean)
    quantized = all(abs(phi - round(phi)) <= tol for phi in fluxes)
    return FluxReport(fluxes, quantized, tol)
