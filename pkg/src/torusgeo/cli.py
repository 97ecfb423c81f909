"""Command-line front end: ``torusgeo {simulate,curvature,check} --config cfg.json``.

Exit codes: 0 success, 1 failed property check, 2 invalid config or
dimension mismatch, 3 blow-up during integration, 4 degenerate plane.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import jsonschema
import numpy as np

from . import checks
from .curvature import (
    DegeneratePlaneError,
    curvature_central,
    curvature_diffvol,
    curvature_gauge,
    curvature_gauge_full,
    curvature_general,
    prop6_closed_form,
    prop6_numeric,
    relative_difference,
    sweep,
    sweep_to_csv,
)
from .extension import CentralElement, GaugeElement, MagneticField, flux_check
from .flow import MODELS, BlowUpError, FlowState, SimConfig, integrate
from .literals import FIELD_SCHEMA, MAGNETIC_SCHEMA, LiteralError, field_from_literal, magnetic_from_literal
from .random_fields import random_magnetic_field, random_scalar_field, random_vector_field
from .spectral import DimensionError, FourierScalarField

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_BLOWUP, EXIT_DEGENERATE = 0, 1, 2, 3, 4

_NUM = {"type": "number"}
_VEC3 = {"type": "array", "items": _NUM, "minItems": 3, "maxItems": 3}
_IVEC3 = {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3}

SIMULATE_SCHEMA = {
    "type": "object",
    "properties": {
        "model": {"enum": list(MODELS)},
        "B": MAGNETIC_SCHEMA,
        "a": _NUM,
        "initial": {
            "type": "object",
            "properties": {"u": FIELD_SCHEMA, "rho": FIELD_SCHEMA},
            "required": ["u"],
            "additionalProperties": False,
        },
        "dt": {"type": "number", "exclusiveMinimum": 0},
        "t_end": {"type": "number", "minimum": 0},
        "truncation_radius": {"type": "integer", "minimum": 0},
        "record_every": {"type": "integer", "minimum": 1},
        "out": {"type": "string"},
    },
    "required": ["model", "initial", "dt", "t_end", "truncation_radius"],
    "additionalProperties": False,
}

_RANDOM = {
    "type": "object",
    "properties": {"dim": {"enum": [2, 3]}, "modes": {"type": "integer", "minimum": 1, "maximum": 20}},
    "additionalProperties": False,
}


def _curvature_schema(formula: str, props: dict, required: Sequence[str]) -> dict:
    base = {"formula": {"const": formula}, "seed": {"type": "integer"}, "out": {"type": "string"}}
    return {
        "type": "object",
        "properties": {**base, **props},
        "required": ["formula", *required],
        "additionalProperties": False,
    }


_PLANE = {"X": FIELD_SCHEMA, "Y": FIELD_SCHEMA, "random": _RANDOM}
_CENTRAL = {"X1": FIELD_SCHEMA, "X2": FIELD_SCHEMA, "a1": _NUM, "a2": _NUM, "B": MAGNETIC_SCHEMA, "random": _RANDOM}
_GAUGE_FULL = {
    "X1": FIELD_SCHEMA,
    "X2": FIELD_SCHEMA,
    "f1": FIELD_SCHEMA,
    "f2": FIELD_SCHEMA,
    "B": MAGNETIC_SCHEMA,
    "random": _RANDOM,
}
_PROP6 = {"p": _IVEC3, "u_p": _VEC3, "v_p": _VEC3, "B0": _VEC3, "setting": {"enum": ["central", "gauge"]}}
_SWEEP = {
    "p": _IVEC3,
    "u_dir": _VEC3,
    "v_p": _VEC3,
    "B0": _VEC3,
    "setting": {"enum": ["central", "gauge"]},
    "u_sq_min": {"type": "number", "minimum": 0},
    "u_sq_max": {"type": "number", "minimum": 0},
    "points": {"type": "integer", "minimum": 2},
}

CURVATURE_SCHEMAS = {
    "general": _curvature_schema("general", _PLANE, []),
    "diffvol": _curvature_schema("diffvol", _PLANE, []),
    "central": _curvature_schema("central", _CENTRAL, []),
    "gauge": _curvature_schema("gauge", _CENTRAL, []),
    "gauge_full": _curvature_schema("gauge_full", _GAUGE_FULL, []),
    "prop6": _curvature_schema("prop6", _PROP6, ["p", "u_p", "v_p", "B0"]),
    "prop6-sweep": _curvature_schema("prop6-sweep", _SWEEP, ["u_sq_max"]),
}

CHECK_SCHEMA = {
    "type": "object",
    "properties": {
        "suite": {"enum": ["adjoints", "cocycle", "flux", "all"]},
        "seed": {"type": "integer"},
        "cases": {"type": "integer", "minimum": 1},
        "B": MAGNETIC_SCHEMA,
        "tol": {"type": "number", "exclusiveMinimum": 0},
    },
    "required": ["suite"],
    "additionalProperties": False,
}


class ConfigError(ValueError):
    pass


def _validate(config: Any, schema: dict) -> None:
    try:
        jsonschema.validate(config, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {path}: {exc.message}") from None


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def cmd_simulate(config: dict, out: Optional[str] = None) -> int:
    _validate(config, SIMULATE_SCHEMA)
    model = config["model"]
    u = field_from_literal(config["initial"]["u"], "vector")
    if not u.is_divergence_free():
        raise ConfigError("initial velocity must be divergence-free")
    rho = None
    if model == "charged":
        rho_lit = config["initial"].get("rho")
        rho = field_from_literal(rho_lit, "scalar") if rho_lit else FourierScalarField.zero(u.dim)
        if rho.dim != u.dim:
            raise DimensionError("rho and u have different dimensions")
    if model != "euler" and u.dim != 3:
        raise DimensionError(f"model {model!r} needs d = 3")
    B = magnetic_from_literal(config.get("B")) if model != "euler" else None
    state = FlowState(model, u, a=float(config.get("a", 1.0 if model == "central" else 0.0)), rho=rho)
    sim = SimConfig(config["dt"], config["t_end"], config["truncation_radius"], config.get("record_every", 1))
    traj = integrate(state, sim, B)
    _write(traj.to_csv(), out or config.get("out"))
    print(f"final relative energy drift: {traj.final_energy_drift():.6e}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------


def _random_plane(config: dict, seed: int, dim: int = 3, modes: int = 4):
    spec = config.get("random", {})
    rng = np.random.default_rng(config.get("seed", seed))
    dim, modes = spec.get("dim", dim), spec.get("modes", modes)
    return rng, dim, modes


def _vector(config, key, rng, dim, modes):
    if key in config:
        return field_from_literal(config[key], "vector")
    return random_vector_field(rng, dim, modes, 3)


def _scalar(config, key, rng, modes):
    if key in config:
        return field_from_literal(config[key], "scalar")
    return random_scalar_field(rng, 3, modes, 3)


def _curvature_report(config: dict, seed: int) -> dict:
    formula = config["formula"]
    rng, dim, modes = _random_plane(config, seed)
    if formula in ("general", "diffvol"):
        x, y = _vector(config, "X", rng, dim, modes), _vector(config, "Y", rng, dim, modes)
        primary = curvature_general(x, y) if formula == "general" else curvature_diffvol(x, y)
        other = curvature_diffvol(x, y) if formula == "general" else curvature_general(x, y)
        rep = primary.as_dict()
        rep["cross_check"] = {
            "formula": "diffvol" if formula == "general" else "general",
            "unnormalized": other.unnormalized,
            "rel_diff": relative_difference(primary.unnormalized, other.unnormalized),
        }
        return rep
    if formula in ("central", "gauge", "gauge_full"):
        if "B" in config:
            B = magnetic_from_literal(config["B"])
        else:
            B = MagneticField(random_magnetic_field(rng))
        x1, x2 = _vector(config, "X1", rng, 3, modes), _vector(config, "X2", rng, 3, modes)
        if x1.dim != 3 or x2.dim != 3:
            raise DimensionError("extension curvature needs d = 3")
        if formula == "gauge_full":
            f1, f2 = _scalar(config, "f1", rng, modes), _scalar(config, "f2", rng, modes)
            primary = curvature_gauge_full(x1, f1, x2, f2, B)
            other = curvature_general(GaugeElement(x1, f1), GaugeElement(x2, f2), B)
        else:
            a1 = float(config.get("a1", rng.uniform(-1, 1)))
            a2 = float(config.get("a2", rng.uniform(-1, 1)))
            if formula == "central":
                primary = curvature_central(x1, a1, x2, a2, B)
                other = curvature_general(CentralElement(x1, a1), CentralElement(x2, a2), B)
            else:
                primary = curvature_gauge(x1, a1, x2, a2, B)
                c1, c2 = FourierScalarField.constant(a1, 3), FourierScalarField.constant(a2, 3)
                other = curvature_general(GaugeElement(x1, c1), GaugeElement(x2, c2), B)
        rep = primary.as_dict()
        rep["cross_check"] = {
            "formula": "general",
            "unnormalized": other.unnormalized,
            "rel_diff": relative_difference(primary.unnormalized, other.unnormalized),
        }
        return rep
    # prop6
    setting = config.get("setting", "central")
    closed = prop6_closed_form(config["p"], config["u_p"], config["v_p"], config["B0"], setting)
    numeric = prop6_numeric(config["p"], config["u_p"], config["v_p"], config["B0"], setting)
    return {
        "setting": setting,
        "numeric": numeric.as_dict(),
        "closed_form": {"value": closed.value, "threshold": closed.threshold, "positive": closed.positive},
        "rel_diff": relative_difference(numeric.unnormalized, closed.value),
        "positive": closed.positive,
    }


def cmd_curvature(config: dict, out: Optional[str] = None, seed: int = 0) -> int:
    formula = config.get("formula") if isinstance(config, dict) else None
    if formula not in CURVATURE_SCHEMAS:
        raise ConfigError(f"formula must be one of {sorted(CURVATURE_SCHEMAS)}, got {formula!r}")
    _validate(config, CURVATURE_SCHEMAS[formula])
    out = out or config.get("out")
    if formula == "prop6-sweep":
        grid = np.linspace(config.get("u_sq_min", 0.0), config["u_sq_max"], config.get("points", 100))
        rows = sweep(
            grid,
            p=config.get("p", (0, 0, 1)),
            u_dir=config.get("u_dir", (1.0, 0.0, 0.0)),
            v_p=config.get("v_p", (0.0, 1.0, 0.0)),
            B0=config.get("B0", (0.0, 0.0, 1.0)),
            setting=config.get("setting", "central"),
        )
        _write(sweep_to_csv(rows), out)
        return EXIT_OK
    _write(_dumps(_curvature_report(config, seed)), out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def cmd_check(config: dict, seed: Optional[int] = None) -> int:
    _validate(config, CHECK_SCHEMA)
    seed = config.get("seed", 0) if seed is None else seed
    B = magnetic_from_literal(config["B"]) if "B" in config else None
    suite = config["suite"]
    results = checks.run_suite(suite, seed, config.get("cases", 50), B, config.get("tol", checks.DEFAULT_TOL))
    if suite in ("flux", "all"):
        rep = flux_check(B if B is not None else MagneticField.zero())
        print("fluxes: " + ", ".join(f"{p:.12g}" for p in rep.fluxes) + f"  quantized={str(rep.quantized).lower()}")
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(f"FAILED {r.name}: seed={seed} case={r.worst_case}", file=sys.stderr)
    return EXIT_FAILED if failed else EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torusgeo", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="path to a JSON config")
    common.add_argument("--out", help="output path (overrides the config's 'out')")
    common.add_argument("--seed", type=int, help="seed for random inputs (overrides the config's 'seed')")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="integrate a geodesic equation, write a trajectory CSV")
    sub.add_parser("curvature", parents=[common], help="evaluate a curvature formula or sweep")
    sub.add_parser("check", parents=[common], help="run seeded property suites")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "simulate":
            return cmd_simulate(config, args.out)
        if args.command == "curvature":
            if args.seed is not None and isinstance(config, dict):
                config = {**config, "seed": args.seed}
            return cmd_curvature(config, args.out)
        return cmd_check(config, args.seed)
    except BlowUpError as exc:
        print(f"error: blow-up: {exc} (t_fail={exc.time:.6g})", file=sys.stderr)
        return EXIT_BLOWUP
    except DegeneratePlaneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ConfigError, LiteralError, DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
