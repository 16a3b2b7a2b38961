"""Ensemble Kalman-Bucy propagation of the hypothesis blocks.

Each member moves by drift, process noise, and a correction proportional to
the empirical state-observation cross-covariance of its block:

    x <- x + f(x, lambda_i) dt + Q^(1/2) dW + C_i R^-1 dI.

The innovation dI is either the deterministic form, observation increment
minus the average of member and block-mean predictions, or the stochastic
form with perturbed member predictions; both target the same filtering
distribution.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..errors import FilterDivergenceError
from .mixture import FilterConfig, ParticleMixture


def empirical_cross_cov(states: np.ndarray, h) -> np.ndarray:
    """Sample cross-covariance (1/(M-1)) sum (x - xbar)(h(x) - hbar)'.

    ``states`` is (M, state_dim) and ``h`` maps it to (M, obs_dim).
    """
    states = np.atleast_2d(np.asarray(states, dtype=float))
    n_members = states.shape[0]
    if n_members < 2:
        raise ValueError(f"cross-covariance needs at least 2 members, got {n_members}")
    observed = np.atleast_2d(np.asarray(h(states), dtype=float))
    centered_x = states - states.mean(axis=0)
    centered_h = observed - observed.mean(axis=0)
    return centered_x.T @ centered_h / (n_members - 1)


def _propagate_block(model, states, params, dy, config, r_inv, rng):
    """One EnKBF step of a single hypothesis block; params stay fixed."""
    dt = config.dt
    observed = model.observe(states)
    block_mean = observed.mean(axis=0)
    centered_x = states - states.mean(axis=0)
    centered_h = observed - block_mean
    cross_cov = centered_x.T @ centered_h / (states.shape[0] - 1)
    gain = cross_cov @ r_inv

    noise = np.sqrt(dt) * model.process_noise(rng, states.shape[0])
    if config.innovation_variant == "deterministic":
        innovation = dy - 0.5 * (observed + block_mean) * dt
    else:
        perturbation = np.sqrt(dt) * model.obs_noise(rng, states.shape[0])
        innovation = dy - observed * dt + perturbation
    return states + model.drift(states, params) * dt + noise + innovation @ gain.T


def enkbf_step(
    model,
    mixture: ParticleMixture,
    dy: np.ndarray,
    config: FilterConfig,
    rngs: list[np.random.Generator],
    workers: int = 1,
) -> ParticleMixture:
    """Advance all blocks one observation increment; weights untouched.

    ``rngs`` holds one generator per hypothesis block, so the result does
    not depend on the order in which blocks are processed; with
    ``workers > 1`` the blocks run on a thread pool with identical output.
    """
    dy = np.asarray(dy, dtype=float)
    if dy.shape != (model.obs_dim,):
        raise ValueError(f"observation increment has shape {dy.shape}, model expects ({model.obs_dim},)")
    if len(rngs) != mixture.n_hypotheses:
        raise ValueError(f"{len(rngs)} rng streams for {mixture.n_hypotheses} blocks")
    r_inv = np.linalg.inv(model.obs_cov)

    def step_block(i: int) -> np.ndarray:
        return _propagate_block(
            model, mixture.states[i], mixture.parameters[i], dy, config, r_inv, rngs[i]
        )

    n_blocks = mixture.n_hypotheses
    new_states = np.empty_like(mixture.states)
    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for i, block in enumerate(pool.map(step_block, range(n_blocks))):
                new_states[i] = block
    else:
        for i in range(n_blocks):
            new_states[i] = step_block(i)

    if not np.all(np.isfinite(new_states)):
        bad = np.argwhere(~np.isfinite(new_states))
        hyp, member = int(bad[0][0]), int(bad[0][1])
        raise FilterDivergenceError(
            f"non-finite state after propagation (hypothesis {hyp}, member {member})",
            hypothesis=hyp,
            member=member,
        )
    return mixture.with_(states=new_states, time_index=mixture.time_index + 1)
