"""Transport-based resampling of parameter hypotheses and their ensembles.

Instead of resampling with replacement (which duplicates hypotheses), the
weighted hypotheses are pushed onto uniform weights through the optimal
coupling T* between the weighted and the uniform empirical measure over
the hypothesis locations.  New hypotheses are the convex combinations

    lambda_j <- L sum_i lambda_i T*_ij,
    states_j <- L sum_i states_i T*_ij   (memberwise),

whose uniform average reproduces the weighted prior mean exactly because
the row marginals of T* are the prior weights.

Note the scaling: the column marginals are 1/L, so L * T*[:, j] is the
convex-combination weight vector of output hypothesis j.  (Some write-ups
of this transform print the ensemble size M as the scaling factor of the
state update; with column marginals 1/L only the factor L makes the
combinations convex, so L is used for parameters and states alike.)
"""

from __future__ import annotations

import logging

import numpy as np

from ..transport import DiscreteMeasure, barycenter, cost_matrix, extract_permutations, sinkhorn, solve_transport
from .mixture import FilterConfig, ParticleMixture

logger = logging.getLogger(__name__)


def _resampling_locations(mixture: ParticleMixture, config: FilterConfig) -> np.ndarray:
    if config.distance_space == "parameters_only":
        return mixture.parameters
    return np.hstack([mixture.parameters, mixture.block_state_means()])


def _rearrange_members(mixture: ParticleMixture) -> np.ndarray | None:
    """Align member indices across blocks via the barycenter permutations.

    Returns rearranged states, or None when any extracted permutation is
    flagged as untrustworthy (the caller then mixes unaligned members).
    """
    measures = [DiscreteMeasure.uniform(block) for block in mixture.states]
    result = barycenter(measures)
    extraction = extract_permutations(result.couplings, mixture.n_members)
    if extraction.any_flagged:
        logger.warning(
            "barycenter couplings are not permutations (max deviation %.3e); skipping rearrangement",
            float(extraction.deviations.max()),
        )
        return None
    rearranged = np.empty_like(mixture.states)
    for i, assignment in enumerate(extraction.assignments):
        rearranged[i] = mixture.states[i][assignment]
    return rearranged


def etpf_resample(mixture: ParticleMixture, config: FilterConfig) -> ParticleMixture:
    """Replace the weighted mixture by an equally weighted one.

    Solves the L x L transport problem from the current weights to uniform
    over the hypothesis locations (parameters, or parameters joined with
    block state means, per ``config.distance_space``), then applies the
    transform to parameters and state blocks and resets the weights.
    """
    n_hyp = mixture.n_hypotheses
    locations = _resampling_locations(mixture, config)
    uniform = np.full(n_hyp, 1.0 / n_hyp)
    cost = cost_matrix(locations, locations)
    if config.transport_backend == "exact_lp":
        coupling = solve_transport(cost, mixture.weights, uniform)
    else:
        coupling = sinkhorn(cost, mixture.weights, uniform, epsilon=config.sinkhorn_epsilon)

    states = mixture.states
    if config.use_barycenter_rearrangement and mixture.n_hypotheses > 1:
        rearranged = _rearrange_members(mixture)
        if rearranged is not None:
            states = rearranged

    mixing = n_hyp * coupling.plan  # column j holds the combination weights of output j
    new_parameters = mixing.T @ mixture.parameters
    new_states = np.einsum("ij,imx->jmx", mixing, states)
    return mixture.with_(
        parameters=new_parameters,
        states=new_states,
        weights=uniform.copy(),
    )
