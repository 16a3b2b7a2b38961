"""Forward models, field priors, and twin-experiment data generation."""

from .gaussian_field import FieldSampler, GaussianFieldPrior, sample_gaussian_field
from .grid import GridSpec, laplacian_eigenvalue, laplacian_periodic
from .linear import LinearGaussianModel, kalman_bucy_moments
from .simulate import (
    ObservationPath,
    euler_maruyama_step,
    simulate_reference,
    synthesize_observations,
)
from .wave import WaveParams, WaveState, WaveTwinModel, wave_drift, wave_energy

__all__ = [
    "FieldSampler",
    "GaussianFieldPrior",
    "GridSpec",
    "LinearGaussianModel",
    "ObservationPath",
    "WaveParams",
    "WaveState",
    "WaveTwinModel",
    "euler_maruyama_step",
    "kalman_bucy_moments",
    "laplacian_eigenvalue",
    "laplacian_periodic",
    "sample_gaussian_field",
    "simulate_reference",
    "synthesize_observations",
    "wave_drift",
    "wave_energy",
]
