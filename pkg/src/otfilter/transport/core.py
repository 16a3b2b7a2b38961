"""Discrete measures, cost matrices, and couplings."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

WEIGHT_SUM_TOL = 1e-12
MARGINAL_TOL = 1e-9


@dataclass
class DiscreteMeasure:
    """Weighted point cloud sum_i w_i delta(y - y_i)."""

    locations: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.locations = np.atleast_2d(np.asarray(self.locations, dtype=float))
        self.weights = np.asarray(self.weights, dtype=float)
        if self.locations.shape[0] != self.weights.shape[0]:
            raise ValueError(
                f"{self.locations.shape[0]} locations but {self.weights.shape[0]} weights"
            )
        if np.any(self.weights < 0):
            raise ValueError("weights must be nonnegative")
        if abs(self.weights.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights must sum to 1, got {self.weights.sum()!r}")

    @classmethod
    def uniform(cls, locations) -> "DiscreteMeasure":
        locations = np.atleast_2d(np.asarray(locations, dtype=float))
        n = locations.shape[0]
        return cls(locations=locations, weights=np.full(n, 1.0 / n))

    @property
    def n_atoms(self) -> int:
        return self.locations.shape[0]

    @property
    def dim(self) -> int:
        return self.locations.shape[1]


@dataclass
class Coupling:
    """Nonnegative matrix with prescribed row and column marginals."""

    plan: np.ndarray
    row_marginals: np.ndarray
    col_marginals: np.ndarray
    objective: float = 0.0
    # Diagnostics filled in by the solvers.
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.plan = np.atleast_2d(np.asarray(self.plan, dtype=float))
        self.row_marginals = np.asarray(self.row_marginals, dtype=float)
        self.col_marginals = np.asarray(self.col_marginals, dtype=float)

    @property
    def shape(self) -> tuple[int, int]:
        return self.plan.shape

    def marginal_violation(self) -> float:
        """Max-norm violation of the marginal constraints."""
        row_err = np.abs(self.plan.sum(axis=1) - self.row_marginals).max()
        col_err = np.abs(self.plan.sum(axis=0) - self.col_marginals).max()
        return float(max(row_err, col_err))

    def check_feasible(self, tol: float = MARGINAL_TOL):
        if np.any(self.plan < 0):
            raise ValueError(f"coupling has negative entries (min {self.plan.min():.3e})")
        violation = self.marginal_violation()
        if violation > tol:
            raise ValueError(f"coupling violates marginals by {violation:.3e} > {tol:.1e}")


def cost_matrix(y1, y2) -> np.ndarray:
    """Squared Euclidean distances between two point clouds.

    ``y1`` and ``y2`` are (L1, d) and (L2, d) arrays (1-d inputs are read
    as scalars in d = 1).  Tiny negative values from cancellation are
    clamped to zero and the diagonal is exactly zero when both clouds are
    the same array.
    """
    y1 = np.atleast_2d(np.asarray(y1, dtype=float))
    y2 = np.atleast_2d(np.asarray(y2, dtype=float))
    if y1.ndim != 2 or y2.ndim != 2:
        raise ValueError("point clouds must be 1- or 2-dimensional arrays")
    if y1.shape[1] != y2.shape[1]:
        raise ValueError(f"dimension mismatch: {y1.shape[1]} vs {y2.shape[1]}")
    diff = y1[:, None, :] - y2[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def validate_marginals(cost: np.ndarray, w1: np.ndarray, w2: np.ndarray):
    """Shared input validation for the transport solvers."""
    cost = np.atleast_2d(np.asarray(cost, dtype=float))
    w1 = np.asarray(w1, dtype=float)
    w2 = np.asarray(w2, dtype=float)
    if cost.shape != (w1.shape[0], w2.shape[0]):
        raise ValueError(f"cost shape {cost.shape} does not match marginals ({w1.shape[0]}, {w2.shape[0]})")
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix contains non-finite entries")
    if np.any(cost < 0):
        raise ValueError("cost matrix must be nonnegative")
    if np.any(w1 < 0) or np.any(w2 < 0):
        raise ValueError("marginals must be nonnegative")
    if abs(w1.sum() - w2.sum()) > MARGINAL_TOL:
        raise ValueError(f"marginal sums differ: {w1.sum()!r} vs {w2.sum()!r}")
    return cost, w1, w2
