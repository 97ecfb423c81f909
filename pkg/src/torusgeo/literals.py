"""JSON field literals shared by the CLI and config files.

A field literal is ``{"dim": d, "modes": [{"k": [...], "re": ..., "im": ...}, ...]}``;
only one member of each ``+-k`` pair needs to be listed and the loader fills in
conjugates.  A magnetic-field literal is either ``{"constant": [b1, b2, b3]}``
or a vector field literal.
"""

from __future__ import annotations

from typing import Any, Mapping

import numpy as np

from .extension import MagneticField
from .spectral import FourierScalarField, FourierVectorField, _FourierField

REALITY_TOL = 1e-12

MODE_SCHEMA = {
    "type": "object",
    "properties": {
        "k": {"type": "array", "items": {"type": "integer"}},
        "re": {"oneOf": [{"type": "number"}, {"type": "array", "items": {"type": "number"}}]},
        "im": {"oneOf": [{"type": "number"}, {"type": "array", "items": {"type": "number"}}]},
    },
    "required": ["k", "re"],
    "additionalProperties": False,
}

FIELD_SCHEMA = {
    "type": "object",
    "properties": {
        "dim": {"enum": [2, 3]},
        "modes": {"type": "array", "items": MODE_SCHEMA},
        "divergence_free": {"type": "boolean"},
    },
    "required": ["dim", "modes"],
    "additionalProperties": False,
}

MAGNETIC_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"constant": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}},
            "required": ["constant"],
            "additionalProperties": False,
        },
        FIELD_SCHEMA,
    ]
}


class LiteralError(ValueError):
    """A field literal is malformed or violates the reality / divergence conditions."""


def _coefficient(entry: Mapping[str, Any], shape: tuple) -> np.ndarray:
    re = np.asarray(entry["re"], dtype=float)
    im = np.asarray(entry.get("im", np.zeros_like(re)), dtype=float)
    c = re + 1j * im
    if shape == ():
        if c.size != 1:
            raise LiteralError(f"scalar coefficient expected at k={entry['k']}")
        return c.reshape(())
    if c.shape != shape:
        raise LiteralError(f"coefficient at k={entry['k']} must have {shape[0]} components")
    return c


def field_from_literal(obj: Mapping[str, Any], kind: str = "vector") -> _FourierField:
    """Parse a literal into a :class:`FourierVectorField` or :class:`FourierScalarField`."""
    dim = obj.get("dim")
    if dim not in (2, 3):
        raise LiteralError(f"dim must be 2 or 3, got {dim!r}")
    cls = FourierVectorField if kind == "vector" else FourierScalarField
    shape = cls._value_shape(dim)
    coeffs: dict[tuple, np.ndarray] = {}
    for entry in obj.get("modes", []):
        k = tuple(int(c) for c in entry["k"])
        if len(k) != dim:
            raise LiteralError(f"mode {list(k)} does not have length {dim}")
        if k in coeffs:
            raise LiteralError(f"mode {list(k)} listed twice")
        coeffs[k] = _coefficient(entry, shape)
    for k, c in coeffs.items():
        mk = tuple(-x for x in k)
        if mk in coeffs and np.max(np.abs(coeffs[mk] - np.conj(c)), initial=0.0) > REALITY_TOL * max(1.0, np.abs(c).max()):
            raise LiteralError(f"modes {list(k)} and {list(mk)} violate the reality condition")
    field = cls.from_modes(dim, coeffs, complete_conjugates=True)
    if obj.get("divergence_free") and kind == "vector" and not field.is_divergence_free():
        raise LiteralError("field is flagged divergence-free but k . u_k != 0")
    return field


def field_to_literal(field: _FourierField) -> dict:
    """Literal listing the zero mode and one representative of each ``+-k`` pair."""
    modes = []
    for key, k, c in zip(field.keys, field.modes, field.coeffs):
        if key < 0:
            continue
        c = np.asarray(c)
        if c.ndim == 0:
            modes.append({"k": [int(x) for x in k], "re": float(c.real), "im": float(c.imag)})
        else:
            modes.append({"k": [int(x) for x in k], "re": [float(x) for x in c.real], "im": [float(x) for x in c.imag]})
    return {"dim": field.dim, "modes": modes}


def magnetic_from_literal(obj: Mapping[str, Any] | None) -> MagneticField:
    if obj is None:
        return MagneticField.zero()
    if "constant" in obj:
        return MagneticField.constant(obj["constant"])
    return MagneticField(field_from_literal(obj, "vector"))
