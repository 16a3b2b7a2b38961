"""Damped stochastic wave dynamics on a periodic grid.

State is the pair of fields (u, v): displacement and velocity.  The drift is

    du/dt = v
    dv/dt = c * lap(u) + gamma * lap(v)

with wave velocity c = exp(log_velocity), and stochastic forcing of
amplitude ``noise_amplitude`` acting on the velocity field only.  The
space-time white noise of the continuum equation is discretized as
independent standard normals per grid node (no 1/sqrt(dx) rescaling), so
``noise_amplitude`` is the per-node forcing amplitude of the resulting
finite-dimensional SDE.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, laplacian_periodic


@dataclass(frozen=True)
class WaveParams:
    """Physical parameters: c = exp(log_velocity) keeps the velocity positive."""

    log_velocity: float
    damping: float = 0.0
    noise_amplitude: float = 0.0

    def __post_init__(self):
        if self.damping < 0:
            raise ValueError(f"damping must be >= 0, got {self.damping}")
        if self.noise_amplitude < 0:
            raise ValueError(f"noise_amplitude must be >= 0, got {self.noise_amplitude}")

    @property
    def velocity(self) -> float:
        return float(np.exp(self.log_velocity))


@dataclass
class WaveState:
    """Displacement/velocity field pair on a grid."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        if self.u.shape != self.v.shape or self.u.ndim != 1:
            raise ValueError(f"u and v must be 1-d arrays of equal length, got {self.u.shape} and {self.v.shape}")
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.v))):
            raise FloatingPointError("wave state contains non-finite entries")

    @property
    def n_points(self) -> int:
        return self.u.shape[0]

    def to_vector(self) -> np.ndarray:
        """Flat [u; v] layout used by the filter."""
        return np.concatenate([self.u, self.v])

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "WaveState":
        x = np.asarray(x, dtype=float)
        n = x.shape[0] // 2
        return cls(u=x[:n], v=x[n:])


def wave_drift(state: WaveState, params: WaveParams, grid: GridSpec) -> WaveState:
    """Drift (du/dt, dv/dt) = (v, c lap(u) + gamma lap(v))."""
    if state.n_points != grid.n_points:
        raise ValueError(f"state has {state.n_points} nodes, grid has {grid.n_points}")
    dv = params.velocity * laplacian_periodic(state.u, grid) + params.damping * laplacian_periodic(state.v, grid)
    if not np.all(np.isfinite(dv)):
        raise FloatingPointError("wave drift produced non-finite entries")
    return WaveState(u=state.v.copy(), v=dv)


def wave_energy(state: WaveState, velocity: float, grid: GridSpec) -> float:
    """Discrete energy 0.5 * dx * sum(v^2 + c * (D+ u)^2).

    Conserved exactly by the undamped, unforced semi-discrete system; the
    forward Euler integrator drifts by O(dt) per step.
    """
    grad_u = (np.roll(state.u, -1) - state.u) / grid.dx
    return 0.5 * grid.dx * float(np.sum(state.v**2 + velocity * grad_u**2))


class WaveTwinModel:
    """Flat-vector adapter of the wave dynamics for the filter.

    States are ``[u; v]`` vectors of length ``2 * n_points``; the parameter
    vector carries the single unknown ``log_velocity``.  Damping and forcing
    amplitude are fixed attributes of the experiment.  The observation
    operator reads the velocity field at ``observed_nodes`` (all nodes by
    default) with isotropic noise covariance ``obs_variance * I``.
    """

    def __init__(
        self,
        grid: GridSpec,
        damping: float = 0.0,
        noise_amplitude: float = 0.0,
        obs_variance: float = 1.0,
        observed_nodes: np.ndarray | None = None,
    ):
        if obs_variance <= 0:
            raise ValueError(f"obs_variance must be > 0, got {obs_variance}")
        self.grid = grid
        self.damping = float(damping)
        self.noise_amplitude = float(noise_amplitude)
        self.obs_variance = float(obs_variance)
        if observed_nodes is None:
            observed_nodes = np.arange(grid.n_points)
        self.observed_nodes = np.asarray(observed_nodes, dtype=int)
        if self.observed_nodes.size == 0:
            raise ValueError("observed_nodes must be non-empty")
        if np.any(self.observed_nodes < 0) or np.any(self.observed_nodes >= grid.n_points):
            raise ValueError("observed_nodes out of grid range")
        self.n_params = 1

    @property
    def state_dim(self) -> int:
        return 2 * self.grid.n_points

    @property
    def obs_dim(self) -> int:
        return self.observed_nodes.size

    @property
    def obs_cov(self) -> np.ndarray:
        return self.obs_variance * np.eye(self.obs_dim)

    def drift(self, states: np.ndarray, params: np.ndarray) -> np.ndarray:
        """Vectorized drift on ``(..., 2n)`` states.

        ``params`` is either a single ``(1,)`` vector or a ``(..., 1)``
        batch matching the leading state axes (used by the augmented-state
        baseline where each member carries its own parameter).
        """
        states = np.asarray(states, dtype=float)
        n = self.grid.n_points
        if states.shape[-1] != 2 * n:
            raise ValueError(f"state dim {states.shape[-1]} does not match 2*n_points={2 * n}")
        u = states[..., :n]
        v = states[..., n:]
        c = np.exp(np.asarray(params, dtype=float))[..., 0]
        dv = np.asarray(c)[..., None] * laplacian_periodic(u, self.grid)
        if self.damping != 0.0:
            dv = dv + self.damping * laplacian_periodic(v, self.grid)
        return np.concatenate([v, dv], axis=-1)

    def observe(self, states: np.ndarray) -> np.ndarray:
        """h(x): the velocity field at the observed nodes."""
        states = np.asarray(states, dtype=float)
        n = self.grid.n_points
        return states[..., n:][..., self.observed_nodes]

    def process_noise(self, rng: np.random.Generator, n_draws: int | None = None) -> np.ndarray:
        """Q^(1/2) xi draws: forcing on the v-block only."""
        n = self.grid.n_points
        shape = (2 * n,) if n_draws is None else (n_draws, 2 * n)
        out = np.zeros(shape)
        out[..., n:] = self.noise_amplitude * rng.standard_normal(shape[:-1] + (n,))
        return out

    def obs_noise(self, rng: np.random.Generator, n_draws: int | None = None) -> np.ndarray:
        """R^(1/2) xi draws."""
        shape = (self.obs_dim,) if n_draws is None else (n_draws, self.obs_dim)
        return np.sqrt(self.obs_variance) * rng.standard_normal(shape)
