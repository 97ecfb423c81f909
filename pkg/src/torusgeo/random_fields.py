"""Seeded generators for random trigonometric polynomials.

Wave vectors are drawn from the cube ``|k_i| <= max_mode``; coefficients are
uniform in ``[-1, 1]`` (real and imaginary parts), completed to real fields by
adding conjugate partners, and Leray-projected for divergence-free fields.
"""

from __future__ import annotations

import numpy as np

from .spectral import FourierScalarField, FourierVectorField, leray_project, single_pair


def _draw_modes(rng: np.random.Generator, dim: int, n_modes: int, max_mode: int, include_zero: bool) -> list[tuple]:
    """``n_modes`` distinct representatives of distinct ``+-k`` pairs."""
    chosen: dict[tuple, None] = {}
    seen: set[tuple] = set()
    attempts = 0
    while len(chosen) < n_modes:
        attempts += 1
        if attempts > 100 * (n_modes + 10):
            raise ValueError("could not draw enough distinct modes; raise max_mode")
        k = tuple(int(c) for c in rng.integers(-max_mode, max_mode + 1, size=dim))
        if not include_zero and not any(k):
            continue
        if k in seen:
            continue
        seen.add(k)
        seen.add(tuple(-c for c in k))
        chosen[k] = None
    return list(chosen)


def random_vector_field(
    rng: np.random.Generator,
    dim: int = 3,
    n_modes: int = 4,
    max_mode: int = 3,
    divergence_free: bool = True,
    include_zero: bool = False,
) -> FourierVectorField:
    while True:
        coeffs = {}
        for k in _draw_modes(rng, dim, n_modes, max_mode, include_zero):
            c = rng.uniform(-1, 1, dim) + 1j * rng.uniform(-1, 1, dim)
            coeffs[k] = c.real if not any(k) else c
        u = FourierVectorField.from_modes(dim, coeffs, complete_conjugates=True)
        if divergence_free:
            u = leray_project(u)
        if len(u):
            return u


def random_scalar_field(
    rng: np.random.Generator, dim: int = 3, n_modes: int = 4, max_mode: int = 3, include_zero: bool = True
) -> FourierScalarField:
    coeffs = {}
    for k in _draw_modes(rng, dim, n_modes, max_mode, include_zero):
        c = rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
        coeffs[k] = c.real if not any(k) else c
    return FourierScalarField.from_modes(dim, coeffs, complete_conjugates=True)


def random_single_pair(rng: np.random.Generator, dim: int = 3, max_mode: int = 3) -> FourierVectorField:
    """``U_p = u_p e_p + conj(u_p) e_{-p}`` with ``p . u_p = 0`` and complex ``u_p``."""
    (p,) = _draw_modes(rng, dim, 1, max_mode, include_zero=False)
    c = rng.uniform(-1, 1, dim) + 1j * rng.uniform(-1, 1, dim)
    pv = np.asarray(p, dtype=float)
    c = c - (pv @ c) / (pv @ pv) * pv
    return single_pair(p, c)


def random_magnetic_field(
    rng: np.random.Generator, n_modes: int = 2, max_mode: int = 2, with_mean: bool = True
) -> FourierVectorField:
    """Divergence-free ``B`` on T^3 with a random constant part and ``n_modes`` oscillating pairs."""
    B = FourierVectorField.zero(3)
    if n_modes:
        B = random_vector_field(rng, 3, n_modes, max_mode, divergence_free=True)
    if with_mean:
        B = B + FourierVectorField.constant(rng.uniform(-1, 1, 3))
    return B
