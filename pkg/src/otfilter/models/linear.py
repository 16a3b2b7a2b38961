"""Linear-Gaussian reference model and its exact filtering recursion.

Serves as the validation oracle: for drift f(x) = A x and observation
h(x) = H x the filtering distribution is Gaussian and its moments follow a
closed recursion, against which the ensemble filter can be checked.
"""

from __future__ import annotations

import numpy as np


def _as_spd(name: str, mat: np.ndarray) -> np.ndarray:
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    if mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{name} must be square, got {mat.shape}")
    if not np.allclose(mat, mat.T):
        raise ValueError(f"{name} must be symmetric")
    eigvals = np.linalg.eigvalsh(mat)
    if eigvals.min() <= 0:
        raise ValueError(f"{name} must be positive definite, min eigenvalue {eigvals.min():.3e}")
    return mat


class LinearGaussianModel:
    """dx = A x dt + Q^(1/2) dW observed through dy = H x dt + R^(1/2) dV."""

    def __init__(self, drift_matrix, observation_matrix, process_cov, observation_cov):
        self.A = np.atleast_2d(np.asarray(drift_matrix, dtype=float))
        self.H = np.atleast_2d(np.asarray(observation_matrix, dtype=float))
        self.Q = _as_spd("process_cov", process_cov)
        self.R = _as_spd("observation_cov", observation_cov)
        if self.A.shape[0] != self.A.shape[1]:
            raise ValueError(f"drift_matrix must be square, got {self.A.shape}")
        nx = self.A.shape[0]
        if self.H.shape[1] != nx:
            raise ValueError(f"observation_matrix has {self.H.shape[1]} columns, state dim is {nx}")
        if self.Q.shape[0] != nx:
            raise ValueError("process_cov dimension does not match state dim")
        if self.R.shape[0] != self.H.shape[0]:
            raise ValueError("observation_cov dimension does not match observation dim")
        self._sqrt_q = np.linalg.cholesky(self.Q)
        self._sqrt_r = np.linalg.cholesky(self.R)
        self.n_params = 0

    @property
    def state_dim(self) -> int:
        return self.A.shape[0]

    @property
    def obs_dim(self) -> int:
        return self.H.shape[0]

    @property
    def obs_cov(self) -> np.ndarray:
        return self.R

    def drift(self, states: np.ndarray, params=None) -> np.ndarray:
        return np.asarray(states, dtype=float) @ self.A.T

    def observe(self, states: np.ndarray) -> np.ndarray:
        return np.asarray(states, dtype=float) @ self.H.T

    def process_noise(self, rng: np.random.Generator, n_draws: int | None = None) -> np.ndarray:
        shape = (self.state_dim,) if n_draws is None else (n_draws, self.state_dim)
        return rng.standard_normal(shape) @ self._sqrt_q.T

    def obs_noise(self, rng: np.random.Generator, n_draws: int | None = None) -> np.ndarray:
        shape = (self.obs_dim,) if n_draws is None else (n_draws, self.obs_dim)
        return rng.standard_normal(shape) @ self._sqrt_r.T


def kalman_bucy_moments(model: LinearGaussianModel, path, mean0, cov0):
    """Exact mean/covariance recursion of the discretized Kalman-Bucy filter.

        m <- m + A m dt + P H' R^-1 (dy - H m dt)
        P <- P + (A P + P A' + Q - P H' R^-1 H P) dt

    Returns arrays of shape (n_steps + 1, nx) and (n_steps + 1, nx, nx)
    whose row n holds the moments after assimilating the first n increments
    of ``path``.
    """
    A, H, Q, R = model.A, model.H, model.Q, model.R
    r_inv = np.linalg.inv(R)
    nx = model.state_dim
    mean = np.asarray(mean0, dtype=float).reshape(nx).copy()
    cov = np.atleast_2d(np.asarray(cov0, dtype=float)).copy()
    if cov.shape != (nx, nx):
        raise ValueError(f"cov0 must be ({nx}, {nx}), got {cov.shape}")
    increments = np.atleast_2d(np.asarray(path.increments, dtype=float))
    if increments.shape[1] != model.obs_dim:
        raise ValueError(
            f"observation increments have dim {increments.shape[1]}, model expects {model.obs_dim}"
        )
    dt = path.dt
    means = np.empty((len(increments) + 1, nx))
    covs = np.empty((len(increments) + 1, nx, nx))
    means[0] = mean
    covs[0] = cov
    for n, dy in enumerate(increments):
        gain = cov @ H.T @ r_inv
        mean = mean + A @ mean * dt + gain @ (dy - H @ mean * dt)
        cov = cov + (A @ cov + cov @ A.T + Q - gain @ H @ cov) * dt
        cov = 0.5 * (cov + cov.T)
        means[n + 1] = mean
        covs[n + 1] = cov
    return means, covs
