"""Two-stage filter: ensemble Kalman-Bucy states, transport-resampled parameters."""

from .baseline import AugmentedStateModel, joint_enkbf_assimilate
from .driver import RunRecord, assimilate
from .enkbf import empirical_cross_cov, enkbf_step
from .mixture import FilterConfig, ParticleMixture
from .resample import etpf_resample
from .weights import effective_sample_size, update_weights

__all__ = [
    "AugmentedStateModel",
    "FilterConfig",
    "ParticleMixture",
    "RunRecord",
    "assimilate",
    "effective_sample_size",
    "empirical_cross_cov",
    "enkbf_step",
    "etpf_resample",
    "joint_enkbf_assimilate",
    "update_weights",
]
