"""Particle mixture state and filter configuration."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

WEIGHT_SUM_TOL = 1e-12

INNOVATION_VARIANTS = ("deterministic", "stochastic")
DISTANCE_SPACES = ("parameters_only", "extended_state")
TRANSPORT_BACKENDS = ("exact_lp", "sinkhorn")


@dataclass
class ParticleMixture:
    """L weighted parameter hypotheses, each carrying M state samples.

    ``parameters`` is (L, n_params), ``weights`` is (L,) on the simplex,
    ``states`` is (L, M, state_dim).  Operations never mutate a mixture;
    they return new instances.
    """

    parameters: np.ndarray
    weights: np.ndarray
    states: np.ndarray
    time_index: int = 0

    def __post_init__(self):
        self.parameters = np.atleast_2d(np.asarray(self.parameters, dtype=float))
        self.weights = np.asarray(self.weights, dtype=float)
        self.states = np.asarray(self.states, dtype=float)
        if self.states.ndim != 3:
            raise ValueError(f"states must be (L, M, state_dim), got shape {self.states.shape}")
        n_hyp = self.parameters.shape[0]
        if self.weights.shape != (n_hyp,):
            raise ValueError(f"weights shape {self.weights.shape} does not match {n_hyp} hypotheses")
        if self.states.shape[0] != n_hyp:
            raise ValueError(f"states carry {self.states.shape[0]} blocks for {n_hyp} hypotheses")
        if np.any(self.weights < 0):
            raise ValueError("weights must be nonnegative")
        if abs(self.weights.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights must sum to 1, got {self.weights.sum()!r}")

    @property
    def n_hypotheses(self) -> int:
        return self.parameters.shape[0]

    @property
    def n_members(self) -> int:
        return self.states.shape[1]

    @property
    def state_dim(self) -> int:
        return self.states.shape[2]

    @property
    def n_params(self) -> int:
        return self.parameters.shape[1]

    def block_state_means(self) -> np.ndarray:
        """Per-hypothesis ensemble means, shape (L, state_dim)."""
        return self.states.mean(axis=1)

    def with_(self, **changes) -> "ParticleMixture":
        return replace(self, **changes)


@dataclass(frozen=True)
class FilterConfig:
    """Knobs of the two-stage update."""

    dt: float
    innovation_variant: str = "deterministic"
    ess_threshold_fraction: float = 0.75
    distance_space: str = "parameters_only"
    use_barycenter_rearrangement: bool = False
    transport_backend: str = "exact_lp"
    sinkhorn_epsilon: float | None = None

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.innovation_variant not in INNOVATION_VARIANTS:
            raise ValueError(f"innovation_variant must be one of {INNOVATION_VARIANTS}, got {self.innovation_variant!r}")
        if not 0.0 < self.ess_threshold_fraction <= 1.0:
            raise ValueError(f"ess_threshold_fraction must be in (0, 1], got {self.ess_threshold_fraction}")
        if self.distance_space not in DISTANCE_SPACES:
            raise ValueError(f"distance_space must be one of {DISTANCE_SPACES}, got {self.distance_space!r}")
        if self.transport_backend not in TRANSPORT_BACKENDS:
            raise ValueError(f"transport_backend must be one of {TRANSPORT_BACKENDS}, got {self.transport_backend!r}")
