"""Importance-weight dynamics over the parameter hypotheses.

The discrete update multiplies each weight by the Gaussian likelihood
factor of the observation increment under the block's predicted mean,

    w_i <- w_i * exp( hbar_i' R^-1 dy - 0.5 hbar_i' R^-1 hbar_i dt ),

then renormalizes.  The exponential form keeps weights positive; the
update runs in log space with max-subtraction because realistic
observation covariances make the raw exponents overflow.
"""

from __future__ import annotations

import numpy as np

from ..errors import FilterDegeneracyError


def update_weights(weights, block_means, dy, obs_cov, dt) -> np.ndarray:
    """Bayes-reweight the hypotheses given one observation increment.

    ``block_means`` is (L, obs_dim): the per-block ensemble means of the
    predicted observations.  Returns a fresh simplex vector.
    """
    weights = np.asarray(weights, dtype=float)
    block_means = np.atleast_2d(np.asarray(block_means, dtype=float))
    dy = np.asarray(dy, dtype=float)
    r_inv_dy = np.linalg.solve(obs_cov, dy)
    r_inv_means = np.linalg.solve(obs_cov, block_means.T)  # (obs_dim, L)
    data_term = block_means @ r_inv_dy
    energy_term = np.einsum("iy,yi->i", block_means, r_inv_means)
    log_factors = data_term - 0.5 * energy_term * dt

    with np.errstate(divide="ignore"):
        log_weights = np.log(weights) + log_factors
    if np.any(np.isnan(log_weights)):
        raise FilterDegeneracyError(
            "non-finite weight exponent",
            diagnostics={"log_factors": log_factors, "weights": weights},
        )
    log_weights -= log_weights.max()
    new_weights = np.exp(log_weights)
    total = new_weights.sum()
    if not np.isfinite(total) or total <= 0.0:
        raise FilterDegeneracyError(
            "all posterior weights numerically zero",
            diagnostics={"log_factors": log_factors, "weights": weights},
        )
    return new_weights / total


def effective_sample_size(weights) -> float:
    """1 / sum(w_i^2): the effective number of equally weighted hypotheses."""
    weights = np.asarray(weights, dtype=float)
    return float(1.0 / np.sum(weights**2))
