"""Exact arithmetic on trigonometric polynomials over the flat torus T^d.

Fields are stored sparsely as an array of integer wave vectors together with
their complex coefficients, with both ``k`` and ``-k`` present (full symmetric
storage).  Every bilinear operation is a direct convolution over the two
supports, so results are exact up to floating point and no truncation ever
happens inside this module.

Conventions
-----------
* ``e_k(x) = exp(i k.x)`` on ``[0, 2pi)^d``.
* ``<a, b> = (2pi)^d sum_k a_k . b_{-k}`` (the L^2 pairing).
* ``lie_bracket(u, v) = grad_u v - grad_v u`` is the vector-field bracket;
  the Lie algebra adjoint action used by the Euler-Arnold machinery is its
  negative, ``ad_action(X, Y) = grad_Y X - grad_X Y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

TWO_PI = 2.0 * np.pi

# Linear signed key: key(k + l) = key(k) + key(l), key(-k) = -key(k).
_KEY_BASE = 1 << 20
_MAX_ABS_MODE = (_KEY_BASE // 2) - 1


class DimensionError(ValueError):
    """Raised when fields of incompatible dimension are combined."""


def _mode_keys(modes: np.ndarray) -> np.ndarray:
    if modes.size and np.abs(modes).max() > _MAX_ABS_MODE:
        raise ValueError(f"wave vector component exceeds {_MAX_ABS_MODE}")
    keys = np.zeros(modes.shape[0], dtype=np.int64)
    for i in range(modes.shape[1]):
        keys += modes[:, i].astype(np.int64) * (_KEY_BASE**i)
    return keys


def _accumulate(dim, keys, mode_of, values):
    """Sum ``values`` over equal ``keys``; ``mode_of(idx)`` returns the modes of rows ``idx``."""
    if keys.size == 0:
        return np.zeros((0, dim), dtype=np.int64), values[:0]
    uniq, first, inv = np.unique(keys, return_index=True, return_inverse=True)
    n = uniq.size
    flat = values.reshape(values.shape[0], -1)
    out = np.empty((n, flat.shape[1]), dtype=complex)
    for c in range(flat.shape[1]):
        out[:, c] = np.bincount(inv, weights=flat[:, c].real, minlength=n) + 1j * np.bincount(
            inv, weights=flat[:, c].imag, minlength=n
        )
    out = out.reshape((n,) + values.shape[1:])
    modes = mode_of(first)
    keep = np.any(out.reshape(n, -1) != 0, axis=1)
    return modes[keep], out[keep]


@dataclass(frozen=True, eq=False)
class _FourierField:
    dim: int
    modes: np.ndarray
    coeffs: np.ndarray

    # -- construction -----------------------------------------------------
    @classmethod
    def _raw(cls, dim: int, modes, coeffs):
        """Build from arrays that may contain duplicate modes or zeros."""
        modes = np.asarray(modes, dtype=np.int64).reshape(-1, dim)
        coeffs = np.asarray(coeffs, dtype=complex).reshape((modes.shape[0],) + cls._value_shape(dim))
        keys = _mode_keys(modes)
        modes, coeffs = _accumulate(dim, keys, lambda idx: modes[idx], coeffs)
        return cls(dim, modes, coeffs)

    @classmethod
    def from_modes(cls, dim: int, coeffs: Mapping[Sequence[int], object], complete_conjugates: bool = False):
        """Build a field from ``{wave_vector: coefficient}``.

        With ``complete_conjugates`` the conjugate partner ``-k`` is filled in
        for every listed ``k`` whose partner is absent.
        """
        items = {tuple(int(c) for c in k): np.asarray(v, dtype=complex) for k, v in coeffs.items()}
        for k in items:
            if len(k) != dim:
                raise DimensionError(f"mode {k} does not have length {dim}")
        if complete_conjugates:
            for k, v in list(items.items()):
                mk = tuple(-c for c in k)
                if mk not in items:
                    items[mk] = np.conj(v)
        if not items:
            return cls.zero(dim)
        modes = np.array(list(items.keys()), dtype=np.int64)
        vals = np.array(list(items.values()), dtype=complex)
        return cls._raw(dim, modes, vals)

    @classmethod
    def zero(cls, dim: int):
        _check_dim(dim)
        return cls(dim, np.zeros((0, dim), dtype=np.int64), np.zeros((0,) + cls._value_shape(dim), dtype=complex))

    @staticmethod
    def _value_shape(dim: int) -> tuple:
        raise NotImplementedError

    # -- bookkeeping ------------------------------------------------------
    @cached_property
    def keys(self) -> np.ndarray:
        return _mode_keys(self.modes)

    def __len__(self) -> int:
        return self.modes.shape[0]

    def coeff(self, k: Sequence[int]) -> np.ndarray:
        """Coefficient at wave vector ``k`` (zero when absent)."""
        key = _mode_keys(np.asarray(k, dtype=np.int64).reshape(1, self.dim))[0]
        idx = np.searchsorted(self.keys, key)
        if idx < len(self) and self.keys[idx] == key:
            return self.coeffs[idx].copy()
        return np.zeros(self._value_shape(self.dim), dtype=complex)

    def as_dict(self) -> dict:
        return {tuple(int(c) for c in k): v.copy() for k, v in zip(self.modes, self.coeffs)}

    def max_mode(self) -> int:
        """Largest ``|k_i|`` occupied (0 for constants and the zero field)."""
        return int(np.abs(self.modes).max()) if len(self) else 0

    def max_abs(self) -> float:
        return float(np.abs(self.coeffs).max()) if len(self) else 0.0

    def truncate(self, radius: int):
        """Drop every mode with some ``|k_i| > radius``."""
        keep = np.all(np.abs(self.modes) <= radius, axis=1)
        return type(self)(self.dim, self.modes[keep], self.coeffs[keep])

    def _aligned_conjugate(self) -> np.ndarray:
        """Coefficients at ``-k`` aligned with the rows at ``k`` (zero when missing)."""
        out = np.zeros_like(self.coeffs)
        if not len(self):
            return out
        neg = -self.keys
        idx = np.searchsorted(self.keys, neg)
        idx_c = np.minimum(idx, len(self) - 1)
        hit = self.keys[idx_c] == neg
        out[hit] = self.coeffs[idx_c[hit]]
        return out

    def reality_defect(self) -> float:
        """Max ``|c_{-k} - conj(c_k)|`` over all stored modes."""
        if not len(self):
            return 0.0
        return float(np.abs(self._aligned_conjugate() - np.conj(self.coeffs)).max())

    def is_real(self, tol: float = 1e-12) -> bool:
        return self.reality_defect() <= tol * max(1.0, self.max_abs())

    def real_part(self):
        """Orthogonal projection onto real fields: ``(c_k + conj c_{-k}) / 2``."""
        if not len(self):
            return self
        merged = type(self)._raw(
            self.dim,
            np.concatenate([self.modes, -self.modes]),
            np.concatenate([self.coeffs, np.conj(self.coeffs)]) * 0.5,
        )
        return merged

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.coeffs)))

    # -- linear structure -------------------------------------------------
    def _check_same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check_same(other)
        if not len(other):
            return self
        if not len(self):
            return other
        return type(self)._raw(
            self.dim, np.concatenate([self.modes, other.modes]), np.concatenate([self.coeffs, other.coeffs])
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return type(self)(self.dim, self.modes, -self.coeffs)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        if scalar == 0:
            return type(self).zero(self.dim)
        return type(self)(self.dim, self.modes, self.coeffs * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)


class FourierScalarField(_FourierField):
    """Real trigonometric polynomial ``f = sum_k f_k e_k``."""

    @staticmethod
    def _value_shape(dim):
        return ()

    @classmethod
    def constant(cls, value: float, dim: int):
        return cls.from_modes(dim, {(0,) * dim: value})

    def mean(self) -> float:
        """Spatial mean, i.e. the real part of the zero mode."""
        return float(self.coeff((0,) * self.dim).real)


class FourierVectorField(_FourierField):
    """Real vector-valued trigonometric polynomial ``u = sum_k u_k e_k`` with ``u_k in C^d``."""

    @staticmethod
    def _value_shape(dim):
        return (dim,)

    @classmethod
    def constant(cls, value: Sequence[float], dim: int | None = None):
        value = np.asarray(value, dtype=float)
        dim = value.size if dim is None else dim
        return cls.from_modes(dim, {(0,) * dim: value})

    def divergence_defect(self) -> float:
        """Max ``|k . u_k|`` over stored modes."""
        if not len(self):
            return 0.0
        return float(np.abs(np.einsum("nd,nd->n", self.modes, self.coeffs)).max())

    def is_divergence_free(self, tol: float = 1e-12) -> bool:
        scale = max(1.0, self.max_abs() * max(1, self.max_mode()))
        return self.divergence_defect() <= tol * scale


Field = Union[FourierScalarField, FourierVectorField]


def _check_dim(dim: int) -> None:
    if dim not in (2, 3):
        raise DimensionError(f"only d in {{2, 3}} is supported, got {dim}")


def _same_dim(*fields: _FourierField) -> int:
    dims = {f.dim for f in fields}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def _pairwise(cls, a: _FourierField, b: _FourierField, values: np.ndarray):
    """Place ``values[i, j]`` (pair of mode i of ``a`` and mode j of ``b``) at ``k_i + l_j``."""
    dim = _same_dim(a, b)
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        return cls.zero(dim)
    keys = (a.keys[:, None] + b.keys[None, :]).ravel()
    flat = values.reshape((na * nb,) + values.shape[2:])
    modes, coeffs = _accumulate(dim, keys, lambda idx: a.modes[idx // nb] + b.modes[idx % nb], flat)
    return cls(dim, modes, coeffs)


# ---------------------------------------------------------------------------
# Projections and linear differential operators
# ---------------------------------------------------------------------------


def gradient_project(u: FourierVectorField) -> FourierVectorField:
    """Q(u): mode-wise ``(k . u_k) k / |k|^2``; the constant mode maps to zero."""
    if not len(u):
        return u
    k = u.modes.astype(float)
    k2 = np.einsum("nd,nd->n", k, k)
    nz = k2 > 0
    kdotu = np.einsum("nd,nd->n", k, u.coeffs)
    coeffs = np.zeros_like(u.coeffs)
    coeffs[nz] = (kdotu[nz] / k2[nz])[:, None] * k[nz]
    return FourierVectorField._raw(u.dim, u.modes, coeffs)


def leray_project(u: FourierVectorField) -> FourierVectorField:
    """P(u) = u - Q(u), the orthogonal projection onto divergence-free fields."""
    if not len(u):
        return u
    k = u.modes.astype(float)
    k2 = np.einsum("nd,nd->n", k, k)
    nz = k2 > 0
    coeffs = u.coeffs.copy()
    kdotu = np.einsum("nd,nd->n", k[nz], coeffs[nz])
    coeffs[nz] -= (kdotu / k2[nz])[:, None] * k[nz]
    return FourierVectorField._raw(u.dim, u.modes, coeffs)


def gradient(f: FourierScalarField) -> FourierVectorField:
    """grad f, with coefficient ``i k f_k`` at mode ``k``."""
    coeffs = 1j * f.modes * f.coeffs[:, None]
    return FourierVectorField._raw(f.dim, f.modes, coeffs)


def divergence(u: FourierVectorField) -> FourierScalarField:
    return FourierScalarField._raw(u.dim, u.modes, 1j * np.einsum("nd,nd->n", u.modes, u.coeffs))


# ---------------------------------------------------------------------------
# Bilinear operations (direct convolutions)
# ---------------------------------------------------------------------------


def covariant_derivative(u: FourierVectorField, v: FourierVectorField) -> FourierVectorField:
    """grad_u v: coefficient ``i (l . u_k) v_l`` at mode ``k + l``."""
    _same_dim(u, v)
    m = u.coeffs @ v.modes.T.astype(float)  # m[i, j] = u_{k_i} . l_j
    values = 1j * m[:, :, None] * v.coeffs[None, :, :]
    return _pairwise(FourierVectorField, u, v, values)


def jacobian_transpose_apply(x: FourierVectorField, y: FourierVectorField) -> FourierVectorField:
    """(grad X)^T Y, i.e. ``sum_i (d_j X_i) Y_i``: coefficient ``i (X_k . Y_l) k`` at ``k + l``."""
    _same_dim(x, y)
    d = x.coeffs @ y.coeffs.T
    values = 1j * d[:, :, None] * x.modes[:, None, :]
    return _pairwise(FourierVectorField, x, y, values)


def lie_bracket(u: FourierVectorField, v: FourierVectorField) -> FourierVectorField:
    """Vector-field bracket ``grad_u v - grad_v u``."""
    return covariant_derivative(u, v) - covariant_derivative(v, u)


def ad_action(x: FourierVectorField, y: FourierVectorField) -> FourierVectorField:
    """Adjoint action of the algebra of right-invariant fields: ``-[X, Y] = grad_Y X - grad_X Y``."""
    return covariant_derivative(y, x) - covariant_derivative(x, y)


def ad_transpose(x: FourierVectorField, y: FourierVectorField) -> FourierVectorField:
    """L^2 transpose of ``ad_action(X, .)``: ``P(grad_X Y + (grad X)^T Y)``."""
    return leray_project(covariant_derivative(x, y) + jacobian_transpose_apply(x, y))


def directional_derivative(f: FourierScalarField, x: FourierVectorField) -> FourierScalarField:
    """df.X: coefficient ``i (k . X_l) f_k`` at ``k + l``."""
    _same_dim(f, x)
    m = f.modes.astype(float) @ x.coeffs.T  # m[i, j] = k_i . X_{l_j}
    values = 1j * m * f.coeffs[:, None]
    return _pairwise(FourierScalarField, f, x, values)


def multiply(f: FourierScalarField, x: Field) -> Field:
    """Pointwise product of a scalar field with a scalar or vector field."""
    _same_dim(f, x)
    if isinstance(x, FourierVectorField):
        values = f.coeffs[:, None, None] * x.coeffs[None, :, :]
    else:
        values = f.coeffs[:, None] * x.coeffs[None, :]
    return _pairwise(type(x), f, x, values)


def dot(x: FourierVectorField, y: FourierVectorField) -> FourierScalarField:
    """Pointwise Euclidean product ``X . Y`` as a scalar field."""
    _same_dim(x, y)
    return _pairwise(FourierScalarField, x, y, x.coeffs @ y.coeffs.T)


def cross_B(x: FourierVectorField, b: FourierVectorField) -> FourierVectorField:
    """Pointwise cross product ``X x B``; only defined on T^3."""
    dim = _same_dim(x, b)
    if dim != 3:
        raise DimensionError("the cross product is only defined for d = 3")
    values = np.cross(x.coeffs[:, None, :], b.coeffs[None, :, :])
    return _pairwise(FourierVectorField, x, b, values)


def l2_inner(a: Field, b: Field) -> float:
    """``(2pi)^d sum_k a_k . b_{-k}``; real for real inputs."""
    if type(a) is not type(b):
        raise TypeError("l2_inner needs two fields of the same kind")
    dim = _same_dim(a, b)
    if not len(a) or not len(b):
        return 0.0
    _, ia, ib = np.intersect1d(a.keys, -b.keys, assume_unique=True, return_indices=True)
    prods = a.coeffs[ia] * b.coeffs[ib]
    total = prods.sum() if prods.ndim == 1 else prods.sum(axis=1).sum()
    return float((TWO_PI**dim * total).real)


def l2_norm_sq(a: Field) -> float:
    """``<a, a>`` computed as ``(2pi)^d sum |a_k|^2`` (valid for real fields)."""
    return float(TWO_PI**a.dim * np.sum(np.abs(a.coeffs) ** 2))


def fields_close(a: Field, b: Field, rtol: float = 1e-10, atol: float = 0.0) -> bool:
    """Coefficient-wise comparison relative to the larger operand."""
    diff = (a - b).max_abs()
    return diff <= atol + rtol * max(1.0, a.max_abs(), b.max_abs())


def single_pair(p: Sequence[int], amplitude: Sequence[complex]) -> FourierVectorField:
    """``U_p = u_p e_p + conj(u_p) e_{-p}``."""
    p = tuple(int(c) for c in p)
    return FourierVectorField.from_modes(len(p), {p: np.asarray(amplitude, dtype=complex)}, complete_conjugates=True)


def stream_function_field(k: Sequence[int], amplitude: float = 1.0) -> FourierVectorField:
    """Hamiltonian field ``(d_2 psi, -d_1 psi)`` on T^2 of the stream function ``amplitude * cos(k.x)``."""
    k = np.asarray(k, dtype=np.int64)
    if k.size != 2:
        raise DimensionError("stream functions are defined on T^2")
    psi = FourierScalarField.from_modes(2, {tuple(k): 0.5 * amplitude}, complete_conjugates=True)
    g = gradient(psi)
    rotated = np.stack([g.coeffs[:, 1], -g.coeffs[:, 0]], axis=1)
    return FourierVectorField(2, g.modes, rotated)


def iter_modes(field: _FourierField) -> Iterable[tuple]:
    for k, c in zip(field.modes, field.coeffs):
        yield tuple(int(x) for x in k), c
