"""Energy drift of RK4 for the superconductivity flow as the step size is halved."""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from torusgeo.extension import MagneticField
from torusgeo.flow import FlowState, SimConfig, integrate
from torusgeo.spectral import FourierVectorField, leray_project


@dataclass(frozen=True)
class ConvergenceConfig:
    amplitude: float = 10.0
    field_strength: float = 40.0
    t_end: float = 1.0
    dt: float = 1e-3
    halvings: int = 2
    truncation_radius: int = 1


def initial_state(amplitude: float) -> FlowState:
    u = FourierVectorField.from_modes(
        3,
        {(1, 0, 0): [0, 0.3, 0.2j], (0, 1, 0): [0.25, 0, -0.1], (0, 0, 1): [0.2j, 0.3, 0]},
        complete_conjugates=True,
    )
    return FlowState("supercond", amplitude * leray_project(u))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dt", type=float, default=1e-3)
    ap.add_argument("--halvings", type=int, default=2)
    ap.add_argument("--truncation-radius", type=int, default=1)
    args = ap.parse_args()
    cfg = ConvergenceConfig(dt=args.dt, halvings=args.halvings, truncation_radius=args.truncation_radius)

    B = MagneticField.constant(cfg.field_strength * np.array([0.3, 0.5, 1.0]))
    s0 = initial_state(cfg.amplitude)
    prev = None
    for i in range(cfg.halvings + 1):
        dt = cfg.dt / 2**i
        drift = integrate(s0, SimConfig(dt, cfg.t_end, cfg.truncation_radius), B).relative_energy_drift()
        ratio = "" if prev is None else f"  ratio {prev / drift:.1f}"
        print(f"dt={dt:.3e}  relative energy drift {drift:.3e}{ratio}")
        prev = drift


if __name__ == "__main__":
    main()
