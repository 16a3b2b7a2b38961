"""Twin-experiment orchestration: simulate -> assimilate -> report.

All randomness flows through purpose-keyed substreams of the master seed
(see :mod:`otfilter.rng`), so every artifact is a deterministic function of
(config, seed) and reruns are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import rng as streams
from ..filtering import (
    FilterConfig,
    ParticleMixture,
    RunRecord,
    assimilate,
    joint_enkbf_assimilate,
)
from ..models import (
    FieldSampler,
    GaussianFieldPrior,
    GridSpec,
    LinearGaussianModel,
    ObservationPath,
    WaveTwinModel,
    simulate_reference,
    synthesize_observations,
)
from .config import ConfigError, ExperimentConfig
from .metrics import MetricsReport, compute_metrics
from .tables import component_names, read_csv, write_csv

TRUTH_FILE = "truth.csv"
OBSERVATIONS_FILE = "observations.csv"
RUN_FILE = "run.csv"
METRICS_FILE = "metrics.txt"


def build_model(config: ExperimentConfig):
    """Instantiate the forward model and the true parameter vector."""
    m = config.model
    if m.kind == "wave":
        grid = GridSpec(n_points=m.n_points, domain_length=m.domain_length)
        observed = None if m.observed_nodes is None else np.asarray(m.observed_nodes, dtype=int)
        model = WaveTwinModel(
            grid,
            damping=m.damping,
            noise_amplitude=m.noise_amplitude,
            obs_variance=m.obs_variance,
            observed_nodes=observed,
        )
        params_true = np.array([np.log(m.c_true)])
    else:
        model = LinearGaussianModel(
            drift_matrix=m.drift_matrix,
            observation_matrix=m.observation_matrix,
            process_cov=m.process_cov,
            observation_cov=m.observation_cov,
        )
        params_true = np.zeros(0)
    return model, params_true


def _field_sampler(config: ExperimentConfig, model) -> FieldSampler:
    prior = GaussianFieldPrior(
        variance=config.prior.field_variance,
        length_scale=config.prior.field_length_scale,
    )
    return FieldSampler(prior, model.grid)


def _sample_wave_fields(sampler: FieldSampler, rng: np.random.Generator, n_draws: int | None):
    """Independent displacement and velocity fields, [u; v] layout."""
    return np.concatenate([sampler.sample(rng, n_draws), sampler.sample(rng, n_draws)], axis=-1)


def _linear_state_prior(config: ExperimentConfig, model):
    mean = config.prior.state_mean
    cov = config.prior.state_cov
    mean = np.zeros(model.state_dim) if mean is None else np.asarray(mean, dtype=float)
    cov = np.eye(model.state_dim) if cov is None else np.atleast_2d(np.asarray(cov, dtype=float))
    if mean.shape != (model.state_dim,):
        raise ConfigError(f"prior.state_mean has shape {mean.shape}, model state dim is {model.state_dim}")
    if cov.shape != (model.state_dim, model.state_dim):
        raise ConfigError(f"prior.state_cov has shape {cov.shape}, expected square of dim {model.state_dim}")
    return mean, np.linalg.cholesky(cov)


def sample_truth_initial_state(config: ExperimentConfig, model, seed: int) -> np.ndarray:
    rng = streams.substream(seed, streams.TRUTH_INIT)
    if config.model.kind == "wave":
        return _sample_wave_fields(_field_sampler(config, model), rng, None)
    mean, chol = _linear_state_prior(config, model)
    return mean + chol @ rng.standard_normal(model.state_dim)


def build_initial_mixture(config: ExperimentConfig, model, truth_x0: np.ndarray, seed: int) -> ParticleMixture:
    """Initial hypotheses and state ensembles.

    Every hypothesis block starts from the same ensemble of states.  With
    ``prior.ensemble_init: centered`` the members are the true initial
    state plus prior perturbations (spun-up-ensemble convention); with
    ``prior`` they are plain prior draws.
    """
    n_hyp = config.filter.n_hypotheses
    n_members = config.filter.n_members
    rng_field = streams.substream(seed, streams.PRIOR_FIELD)
    if config.model.kind == "wave":
        fields = _sample_wave_fields(_field_sampler(config, model), rng_field, n_members)
    else:
        mean, chol = _linear_state_prior(config, model)
        fields = mean + rng_field.standard_normal((n_members, model.state_dim)) @ chol.T
    if config.prior.ensemble_init == "centered":
        center = truth_x0 if config.model.kind == "wave" else 0.0
        fields = fields + center if config.model.kind == "wave" else fields
    n_params = getattr(model, "n_params", 0)
    if n_params > 0:
        rng_param = streams.substream(seed, streams.PRIOR_PARAM)
        parameters = rng_param.normal(config.prior.param_mean, config.prior.param_std, size=(n_hyp, n_params))
    else:
        parameters = np.zeros((n_hyp, 0))
    return ParticleMixture(
        parameters=parameters,
        weights=np.full(n_hyp, 1.0 / n_hyp),
        states=np.tile(fields, (n_hyp, 1, 1)),
    )


def state_component_names(config: ExperimentConfig, model) -> list[str]:
    if config.model.kind == "wave":
        n = model.grid.n_points
        return component_names("u", n) + component_names("v", n)
    return component_names("x", model.state_dim)


@dataclass
class SimulationArtifacts:
    truth_path: Path
    observations_path: Path
    trajectory: np.ndarray
    observations: ObservationPath


def run_simulate(config: ExperimentConfig, out_dir: str | Path | None = None) -> SimulationArtifacts:
    """Generate and write the reference trajectory and its observations."""
    model, params_true = build_model(config)
    seed = config.run.seed
    dt = config.run.dt
    x0 = sample_truth_initial_state(config, model, seed)
    trajectory = simulate_reference(
        model, params_true, x0, config.run.t_final, dt, streams.substream(seed, streams.TRUTH_NOISE)
    )
    observations = synthesize_observations(
        model, trajectory, dt, streams.substream(seed, streams.OBS_NOISE)
    )
    out = Path(out_dir if out_dir is not None else config.run.out_dir)
    n_steps = observations.n_steps
    truth_rows = np.column_stack([np.arange(n_steps + 1) * dt, trajectory])
    truth_path = write_csv(out / TRUTH_FILE, ["t"] + state_component_names(config, model), truth_rows)
    obs_rows = np.column_stack([np.arange(n_steps) * dt, observations.increments])
    obs_path = write_csv(
        out / OBSERVATIONS_FILE, ["t"] + component_names("dy", model.obs_dim), obs_rows
    )
    return SimulationArtifacts(truth_path, obs_path, trajectory, observations)


def load_observations(path: str | Path, model, dt: float) -> ObservationPath:
    header, data = read_csv(path)
    if len(header) != model.obs_dim + 1:
        raise ValueError(
            f"{path}: {len(header) - 1} observation columns, model expects {model.obs_dim}"
        )
    return ObservationPath(increments=data[:, 1:], dt=dt)


def load_truth(path: str | Path, model) -> np.ndarray:
    header, data = read_csv(path)
    if len(header) != model.state_dim + 1:
        raise ValueError(f"{path}: {len(header) - 1} state columns, model expects {model.state_dim}")
    return data[:, 1:]


def run_record_rows(record: RunRecord, metrics: MetricsReport) -> tuple[list[str], np.ndarray]:
    n_params = record.parameter_mean.shape[1]
    header = ["t"]
    columns = [record.times]
    for k in range(n_params):
        header += [f"lambda_mean_{k}", f"c_mean_{k}"]
        columns += [record.parameter_mean[:, k], record.exp_parameter_mean[:, k]]
    header += ["ess", "resampled", "rmse"]
    columns += [record.ess, record.resampled.astype(int), metrics.state_rmse]
    return header, np.column_stack(columns)


def run_assimilate(
    config: ExperimentConfig,
    observations_path: str | Path | None = None,
    truth_path: str | Path | None = None,
    out_dir: str | Path | None = None,
) -> tuple[RunRecord, MetricsReport]:
    """Run the filter on observation files and write record + metrics.

    Paths default to the simulate outputs inside the run's output
    directory.  All file validation happens before any compute.
    """
    model, _ = build_model(config)
    out = Path(out_dir if out_dir is not None else config.run.out_dir)
    observations_path = Path(observations_path or out / OBSERVATIONS_FILE)
    truth_path = Path(truth_path or out / TRUTH_FILE)
    dt = config.run.dt
    observations = load_observations(observations_path, model, dt)
    truth = load_truth(truth_path, model)
    if truth.shape[0] != observations.n_steps + 1:
        raise ValueError(
            f"truth has {truth.shape[0]} rows for {observations.n_steps} observation increments"
        )

    seed = config.run.seed
    truth_x0 = truth[0]
    mixture = build_initial_mixture(config, model, truth_x0, seed)
    filter_config = config.filter.filter_config(dt)
    if config.filter.baseline == "joint-enkbf":
        record = joint_enkbf_assimilate(
            model,
            observations,
            init_states=mixture.states[0],
            init_params=np.repeat(
                mixture.parameters, mixture.n_members // mixture.n_hypotheses or 1, axis=0
            )[: mixture.n_members]
            if mixture.n_params
            else np.zeros((mixture.n_members, 0)),
            config=filter_config,
            seed=seed,
        )
    else:
        record = assimilate(
            model, observations, mixture, filter_config, seed, workers=config.filter.workers
        )
    c_true = config.model.c_true if config.model.kind == "wave" else None
    metrics = compute_metrics(record, truth, c_true)
    header, rows = run_record_rows(record, metrics)
    write_csv(out / RUN_FILE, header, rows)
    metrics.write_summary(out / METRICS_FILE)
    return record, metrics
