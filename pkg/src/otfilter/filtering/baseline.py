"""Comparison baseline: one ensemble Kalman-Bucy filter on the augmented state.

The parameters are appended to the state vector, z = (x, lambda), and a
single ensemble of K members is propagated with the usual empirical-gain
correction.  Parameters have zero drift and zero process noise; they are
updated purely through their empirical cross-covariance with the observed
components.  This is the classical all-Gaussian treatment the two-stage
filter is compared against.
"""

from __future__ import annotations

import numpy as np

from ..models.simulate import ObservationPath
from ..rng import block_streams
from .driver import RunRecord
from .enkbf import enkbf_step
from .mixture import FilterConfig, ParticleMixture


class AugmentedStateModel:
    """Flat-vector model on z = (x, lambda) with per-member parameters."""

    def __init__(self, base):
        if base.n_params < 1:
            raise ValueError("augmented baseline needs a parametrized model")
        self.base = base
        self.n_params = 0  # the augmented model itself has no free parameters

    @property
    def state_dim(self) -> int:
        return self.base.state_dim + self.base.n_params

    @property
    def obs_dim(self) -> int:
        return self.base.obs_dim

    @property
    def obs_cov(self) -> np.ndarray:
        return self.base.obs_cov

    def split(self, aug_states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        nx = self.base.state_dim
        return aug_states[..., :nx], aug_states[..., nx:]

    def drift(self, aug_states: np.ndarray, params=None) -> np.ndarray:
        x, lam = self.split(np.asarray(aug_states, dtype=float))
        dx = self.base.drift(x, lam)
        return np.concatenate([dx, np.zeros_like(lam)], axis=-1)

    def observe(self, aug_states: np.ndarray) -> np.ndarray:
        x, _ = self.split(np.asarray(aug_states, dtype=float))
        return self.base.observe(x)

    def process_noise(self, rng: np.random.Generator, n_draws: int | None = None) -> np.ndarray:
        noise_x = self.base.process_noise(rng, n_draws)
        pad = np.zeros(noise_x.shape[:-1] + (self.base.n_params,))
        return np.concatenate([noise_x, pad], axis=-1)

    def obs_noise(self, rng: np.random.Generator, n_draws: int | None = None) -> np.ndarray:
        return self.base.obs_noise(rng, n_draws)


def joint_enkbf_assimilate(
    model,
    observations: ObservationPath,
    init_states: np.ndarray,
    init_params: np.ndarray,
    config: FilterConfig,
    seed: int,
) -> RunRecord:
    """Run the augmented-state baseline and report it as a RunRecord.

    ``init_states`` is (K, state_dim) and ``init_params`` is (K, n_params):
    one parameter draw per member.  The record's parameter means are the
    plain ensemble means of the parameter components; ESS is not a
    meaningful quantity here and is recorded as NaN, and no resample
    events ever occur.
    """
    augmented = AugmentedStateModel(model)
    init_states = np.atleast_2d(np.asarray(init_states, dtype=float))
    init_params = np.atleast_2d(np.asarray(init_params, dtype=float))
    if init_states.shape[0] != init_params.shape[0]:
        raise ValueError(
            f"{init_states.shape[0]} member states but {init_params.shape[0]} parameter draws"
        )
    ensemble = np.concatenate([init_states, init_params], axis=-1)
    mixture = ParticleMixture(
        parameters=np.zeros((1, 0)),
        weights=np.array([1.0]),
        states=ensemble[None, :, :],
    )
    if observations.obs_dim != augmented.obs_dim:
        raise ValueError(
            f"observations have dim {observations.obs_dim}, model expects {augmented.obs_dim}"
        )

    rngs = block_streams(seed, 1)
    n_steps = observations.n_steps
    n_params = init_params.shape[1]
    record = RunRecord(
        times=(np.arange(1, n_steps + 1)) * config.dt,
        parameter_mean=np.empty((n_steps, n_params)),
        exp_parameter_mean=np.empty((n_steps, n_params)),
        block_state_means=np.empty((n_steps, 1, model.state_dim)),
        ess=np.full(n_steps, np.nan),
        resampled=np.zeros(n_steps, dtype=bool),
        weights=np.ones((n_steps, 1)),
    )
    for n in range(n_steps):
        mixture = enkbf_step(augmented, mixture, observations.increments[n], config, rngs)
        x, lam = augmented.split(mixture.states[0])
        record.parameter_mean[n] = lam.mean(axis=0)
        record.exp_parameter_mean[n] = np.exp(lam).mean(axis=0)
        record.block_state_means[n, 0] = x.mean(axis=0)
    return record
