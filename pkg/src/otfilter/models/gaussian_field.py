"""Stationary Gaussian random fields on the periodic grid.

The kernel is the periodic squared-exponential

    k(d) = variance * exp(-2 sin^2(theta / 2) / length_scale^2),

where ``theta`` is the angular separation of two nodes.  On an equidistant
grid the induced covariance matrix is circulant, symmetric and positive
semi-definite, so sampling reduces to an eigendecomposition done once per
prior/grid pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec

# Eigenvalues of the discretized kernel may go slightly negative through
# roundoff; clip below this fraction of the largest eigenvalue, fail beyond.
_EIGENVALUE_CLIP = 1e-10


@dataclass(frozen=True)
class GaussianFieldPrior:
    variance: float = 1.0
    length_scale: float = 1.0

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")
        if self.length_scale <= 0:
            raise ValueError(f"length_scale must be > 0, got {self.length_scale}")

    def kernel(self, angle: np.ndarray | float) -> np.ndarray | float:
        """Covariance at angular separation ``angle`` (radians on the circle)."""
        return self.variance * np.exp(-2.0 * np.sin(np.asarray(angle) / 2.0) ** 2 / self.length_scale**2)

    def covariance_matrix(self, grid: GridSpec) -> np.ndarray:
        """Dense circulant covariance of the field sampled at the grid nodes."""
        theta = 2.0 * np.pi * np.arange(grid.n_points) / grid.n_points
        first_row = np.asarray(self.kernel(theta), dtype=float)
        idx = np.arange(grid.n_points)
        return first_row[(idx[None, :] - idx[:, None]) % grid.n_points]


def _factor(prior: GaussianFieldPrior, grid: GridSpec) -> np.ndarray:
    cov = prior.covariance_matrix(grid)
    eigvals, eigvecs = np.linalg.eigh(cov)
    floor = -_EIGENVALUE_CLIP * max(eigvals.max(), 1.0)
    if eigvals.min() < floor:
        raise FloatingPointError(
            f"discretized kernel covariance is not PSD: min eigenvalue {eigvals.min():.3e}"
        )
    return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


class FieldSampler:
    """Caches the covariance factor so repeated draws are cheap."""

    def __init__(self, prior: GaussianFieldPrior, grid: GridSpec):
        self.prior = prior
        self.grid = grid
        self._factor = _factor(prior, grid)

    def sample(self, rng: np.random.Generator, n_draws: int | None = None) -> np.ndarray:
        """Zero-mean draws with the kernel covariance; shape (n_draws, n_points)."""
        n = self.grid.n_points
        shape = (n,) if n_draws is None else (n_draws, n)
        return rng.standard_normal(shape) @ self._factor.T


def sample_gaussian_field(
    prior: GaussianFieldPrior, grid: GridSpec, rng: np.random.Generator
) -> np.ndarray:
    """One zero-mean draw from the periodic-kernel Gaussian field."""
    return FieldSampler(prior, grid).sample(rng)
