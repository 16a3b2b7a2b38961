"""Periodic 1-d grid and finite-difference operators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    """Equidistant nodes on a circle of circumference ``domain_length``."""

    n_points: int
    domain_length: float = 2.0 * np.pi

    def __post_init__(self):
        if self.n_points < 3:
            raise ValueError(f"n_points must be >= 3, got {self.n_points}")
        if self.domain_length <= 0:
            raise ValueError(f"domain_length must be > 0, got {self.domain_length}")

    @property
    def dx(self) -> float:
        return self.domain_length / self.n_points

    def nodes(self) -> np.ndarray:
        """Node coordinates x_i = i * dx, i = 0..n-1."""
        return np.arange(self.n_points) * self.dx


def laplacian_periodic(field: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Second-order central-difference Laplacian with periodic wraparound.

    Acts on the last axis, so ensembles of fields can be passed as
    ``(..., n_points)`` arrays.  The output of each row sums to zero up to
    roundoff (discrete conservation on the circle).
    """
    field = np.asarray(field, dtype=float)
    if field.shape[-1] != grid.n_points:
        raise ValueError(
            f"field length {field.shape[-1]} does not match grid n_points {grid.n_points}"
        )
    left = np.roll(field, 1, axis=-1)
    right = np.roll(field, -1, axis=-1)
    return (right - 2.0 * field + left) / grid.dx**2


def laplacian_eigenvalue(wavenumber: int, grid: GridSpec) -> float:
    """Exact eigenvalue of the discrete Laplacian for mode cos(k * 2pi x / L).

    The stencil maps the sampled mode to ``-(2 - 2 cos(k dtheta)) / dx**2``
    times itself, where ``dtheta = 2 pi / n_points``.
    """
    dtheta = 2.0 * np.pi * wavenumber / grid.n_points
    return -(2.0 - 2.0 * np.cos(dtheta)) / grid.dx**2
