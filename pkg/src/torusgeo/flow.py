"""Right-hand sides and RK4 integration of the geodesic equations.

Four models share one state type:

``euler``     u_t = -P grad_u u
``supercond`` u_t = -P(grad_u u + u x B)
``central``   u_t = -ad(u)^T u - a k(u),  a_t = 0
``charged``   u_t = -P(grad_u u + rho u x B),  rho_t = -d rho . u

The pressure never appears: it is the gradient part removed by ``P``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .extension import MagneticField, _as_field
from .spectral import (
    FourierScalarField,
    FourierVectorField,
    covariant_derivative,
    cross_B,
    directional_derivative,
    l2_inner,
    l2_norm_sq,
    leray_project,
    multiply,
)

MODELS = ("euler", "supercond", "central", "charged")
BLOWUP_MAGNITUDE = 1e12


class BlowUpError(RuntimeError):
    def __init__(self, message: str, time: float):
        super().__init__(f"{message} at t={time:.6g}")
        self.time = time


@dataclass(frozen=True)
class FlowState:
    """Right logarithmic derivative of a geodesic: ``u`` plus ``a`` or ``rho`` where the model has one."""

    model: str
    u: FourierVectorField
    a: float = 0.0
    rho: Optional[FourierScalarField] = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.model == "charged" and self.rho is None:
            object.__setattr__(self, "rho", FourierScalarField.zero(self.u.dim))

    def axpy(self, c: float, d: "FlowState") -> "FlowState":
        """``self + c * d``."""
        rho = None if self.rho is None else self.rho + c * d.rho
        return replace(self, u=self.u + c * d.u, a=self.a + c * d.a, rho=rho)

    def truncate(self, radius: int) -> "FlowState":
        rho = None if self.rho is None else self.rho.truncate(radius)
        return replace(self, u=self.u.truncate(radius), rho=rho)

    def real_part(self) -> "FlowState":
        rho = None if self.rho is None else self.rho.real_part()
        return replace(self, u=self.u.real_part(), rho=rho)

    def is_finite(self) -> bool:
        return self.u.is_finite() and np.isfinite(self.a) and (self.rho is None or self.rho.is_finite())

    def max_abs(self) -> float:
        return max(self.u.max_abs(), abs(self.a), 0.0 if self.rho is None else self.rho.max_abs())

    def max_mode(self) -> int:
        return max(self.u.max_mode(), 0 if self.rho is None else self.rho.max_mode())


@dataclass(frozen=True)
class SimConfig:
    dt: float
    t_end: float
    truncation_radius: int
    record_every: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be non-negative")
        if self.truncation_radius < 0:
            raise ValueError("truncation_radius must be non-negative")
        if self.record_every < 1:
            raise ValueError("record_every must be at least 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


# ---------------------------------------------------------------------------
# Right-hand sides
# ---------------------------------------------------------------------------


def rhs_euler(u: FourierVectorField) -> FourierVectorField:
    return -leray_project(covariant_derivative(u, u))


def rhs_superconductivity(u: FourierVectorField, B) -> FourierVectorField:
    return -leray_project(covariant_derivative(u, u) + cross_B(u, _as_field(B)))


def rhs_central(u: FourierVectorField, a: float, B) -> tuple[FourierVectorField, float]:
    """``(-ad(u)^T u - a k(u), 0)``.

    Uses ``a k_B(u) = k_{aB}(u)`` and ``ad(u)^T u = P grad_u u`` so that
    ``a = 1`` reproduces :func:`rhs_superconductivity` bit for bit.
    """
    return rhs_superconductivity(u, a * _as_field(B)), 0.0


def rhs_charged(
    u: FourierVectorField, rho: FourierScalarField, B
) -> tuple[FourierVectorField, FourierScalarField]:
    du = -leray_project(covariant_derivative(u, u) + cross_B(multiply(rho, u), _as_field(B)))
    drho = -directional_derivative(rho, u)
    return du, drho


def rhs(state: FlowState, B=None) -> FlowState:
    """Time derivative of ``state`` as a state of the same model."""
    if state.model == "euler":
        return replace(state, u=rhs_euler(state.u), a=0.0)
    if B is None:
        raise ValueError(f"model {state.model!r} needs a magnetic field")
    if state.model == "supercond":
        return replace(state, u=rhs_superconductivity(state.u, B), a=0.0)
    if state.model == "central":
        du, da = rhs_central(state.u, state.a, B)
        return replace(state, u=du, a=da)
    du, drho = rhs_charged(state.u, state.rho, B)
    return replace(state, u=du, a=0.0, rho=drho)


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


def energy_parts(state: FlowState) -> tuple[float, float]:
    """``(||u||^2, auxiliary)`` where the auxiliary part is the fibre contribution to the speed.

    ``supercond`` is the central model at charge 1, so it carries ``a^2 = 1``.
    """
    eu = l2_norm_sq(state.u)
    if state.model == "central":
        return eu, state.a * state.a
    if state.model == "supercond":
        return eu, 1.0
    if state.model == "charged":
        return eu, l2_norm_sq(state.rho)
    return eu, 0.0


def energy(state: FlowState) -> float:
    eu, aux = energy_parts(state)
    return eu + aux


def rho_mean(state: FlowState) -> float:
    if state.model == "charged":
        return state.rho.mean()
    if state.model == "central":
        return state.a
    if state.model == "supercond":
        return 1.0
    return 0.0


def energy_rate(state: FlowState, B=None) -> float:
    """``<rhs(s), s>`` in the extended inner product; zero for every model."""
    d = rhs(state, B)
    out = l2_inner(d.u, state.u) + d.a * state.a
    if state.model == "charged":
        out += l2_inner(d.rho, state.rho)
    return out


def implied_pressure_gradient(state: FlowState, B=None) -> FourierVectorField:
    """Gradient part removed by the projection, i.e. ``grad p`` of the model."""
    u = state.u
    force = covariant_derivative(u, u)
    if state.model in ("supercond", "central"):
        scale = 1.0 if state.model == "supercond" else state.a
        force = force + cross_B(u, scale * _as_field(B))
    elif state.model == "charged":
        force = force + cross_B(multiply(state.rho, u), _as_field(B))
    return leray_project(force) - force


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------


def _galerkin_rhs(state: FlowState, B, radius: Optional[int]) -> FlowState:
    d = rhs(state, B)
    return d if radius is None else d.truncate(radius)


def rk4_step(state: FlowState, dt: float, B=None, truncation_radius: Optional[int] = None, t: float = 0.0) -> FlowState:
    """One classical RK4 step.

    With ``truncation_radius`` each stage derivative is projected onto the
    cube ``|k_i| <= N`` (Galerkin truncation), so the truncated dynamics keeps
    the quadratic energy invariant; the stepped state then lies in the cube.
    """
    if dt == 0:
        return state
    k1 = _galerkin_rhs(state, B, truncation_radius)
    k2 = _galerkin_rhs(state.axpy(0.5 * dt, k1), B, truncation_radius)
    k3 = _galerkin_rhs(state.axpy(0.5 * dt, k2), B, truncation_radius)
    k4 = _galerkin_rhs(state.axpy(dt, k3), B, truncation_radius)
    new = state.axpy(dt / 6.0, k1).axpy(dt / 3.0, k2).axpy(dt / 3.0, k3).axpy(dt / 6.0, k4)
    if truncation_radius is not None:
        new = new.truncate(truncation_radius)
    new = replace(new, a=state.a).real_part()
    if not new.is_finite():
        raise BlowUpError("non-finite coefficients", t + dt)
    if new.max_abs() > BLOWUP_MAGNITUDE:
        raise BlowUpError(f"coefficient magnitude {new.max_abs():.3e} exceeds {BLOWUP_MAGNITUDE:.0e}", t + dt)
    return new


@dataclass
class Sample:
    t: float
    energy: float
    energy_u: float
    energy_aux: float
    rho_mean: float
    max_mode: int


@dataclass
class Trajectory:
    samples: list[Sample] = field(default_factory=list)
    final: Optional[FlowState] = None
    rho_deviation: float = 0.0

    def energies(self) -> np.ndarray:
        return np.array([s.energy for s in self.samples])

    def relative_energy_drift(self) -> float:
        e = self.energies()
        return float(np.max(np.abs(e - e[0])) / abs(e[0])) if e[0] != 0 else float(np.max(np.abs(e)))

    def final_energy_drift(self) -> float:
        e0, e1 = self.samples[0].energy, self.samples[-1].energy
        return (e1 - e0) / e0 if e0 != 0 else e1

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "energy", "energy_u", "energy_aux", "rho_mean", "max_mode"])
        for s in self.samples:
            w.writerow([repr(s.t), repr(s.energy), repr(s.energy_u), repr(s.energy_aux), repr(s.rho_mean), s.max_mode])
        return buf.getvalue()


def _sample(t: float, state: FlowState) -> Sample:
    eu, aux = energy_parts(state)
    return Sample(t, eu + aux, eu, aux, rho_mean(state), state.max_mode())


def integrate(state0: FlowState, config: SimConfig, B=None) -> Trajectory:
    """Fixed-step RK4 from ``state0``, recording diagnostics every ``record_every`` steps.

    ``rho_deviation`` tracks ``max_t max_k |rho_k(t) - rho_k(0)|`` for the charged model.
    """
    if isinstance(B, FourierVectorField):
        B = MagneticField(B)
    if state0.max_mode() > config.truncation_radius:
        raise ValueError("initial state has modes beyond the truncation radius")
    traj = Trajectory()
    state = state0
    traj.samples.append(_sample(0.0, state))
    n = config.n_steps
    for i in range(1, n + 1):
        t_prev = (i - 1) * config.dt
        state = rk4_step(state, config.dt, B, config.truncation_radius, t_prev)
        if state.rho is not None:
            traj.rho_deviation = max(traj.rho_deviation, (state.rho - state0.rho).max_abs())
        if i % config.record_every == 0 or i == n:
            traj.samples.append(_sample(i * config.dt, state))
    traj.final = state
    return traj
