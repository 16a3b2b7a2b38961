"""Twin-experiment data generation: reference trajectories and observations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ObservationPath:
    """Sequence of observation increments dy_n accumulated over steps of size dt."""

    increments: np.ndarray
    dt: float

    def __post_init__(self):
        self.increments = np.atleast_2d(np.asarray(self.increments, dtype=float))
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")

    @property
    def n_steps(self) -> int:
        return self.increments.shape[0]

    @property
    def obs_dim(self) -> int:
        return self.increments.shape[1]


def euler_maruyama_step(state, drift, noise_amplitude, dt, rng: np.random.Generator):
    """One step x + f dt + a sqrt(dt) xi with iid standard normal xi.

    ``noise_amplitude`` is a scalar or a per-component vector; for the wave
    model the vector is zero on the displacement block so forcing acts on
    the velocity field only.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    state = np.asarray(state, dtype=float)
    return state + np.asarray(drift, dtype=float) * dt + noise_amplitude * np.sqrt(dt) * rng.standard_normal(state.shape)


def simulate_reference(model, params, initial_state, t_final, dt, rng: np.random.Generator):
    """Euler-Maruyama reference path of shape (n_steps + 1, state_dim).

    ``t_final`` must be an integer multiple of ``dt`` up to roundoff; the
    path is a deterministic function of the inputs and the stream state.
    """
    if t_final <= 0:
        raise ValueError(f"t_final must be > 0, got {t_final}")
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    n_steps = int(round(t_final / dt))
    if abs(n_steps * dt - t_final) > 1e-9 * max(1.0, t_final):
        raise ValueError(f"t_final={t_final} is not a multiple of dt={dt}")
    state = np.asarray(initial_state, dtype=float).copy()
    if state.shape != (model.state_dim,):
        raise ValueError(f"initial state has shape {state.shape}, model expects ({model.state_dim},)")
    path = np.empty((n_steps + 1, model.state_dim))
    path[0] = state
    sqrt_dt = np.sqrt(dt)
    for n in range(n_steps):
        state = state + model.drift(state, params) * dt + sqrt_dt * model.process_noise(rng)
        if not np.all(np.isfinite(state)):
            raise FloatingPointError(f"reference trajectory diverged at step {n + 1}")
        path[n + 1] = state
    return path


def synthesize_observations(model, trajectory, dt, rng: np.random.Generator) -> ObservationPath:
    """Observation increments dy_n = h(x_n) dt + R^(1/2) sqrt(dt) xi_n.

    One increment per trajectory interval, indexed by its left endpoint.
    """
    trajectory = np.atleast_2d(np.asarray(trajectory, dtype=float))
    if trajectory.shape[1] != model.state_dim:
        raise ValueError(
            f"trajectory states have dim {trajectory.shape[1]}, model expects {model.state_dim}"
        )
    n_steps = trajectory.shape[0] - 1
    signal = model.observe(trajectory[:-1]) * dt
    noise = np.sqrt(dt) * model.obs_noise(rng, n_steps)
    return ObservationPath(increments=signal + noise, dt=dt)
