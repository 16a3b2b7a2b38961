"""Free-support barycenter of uniform point clouds and permutation extraction.

The barycenter of L uniform M-atom measures minimizes the sum of squared
transport distances to the inputs.  The fixed-point scheme alternates

  1. solve the L transport problems between the current support and each
     input cloud (couplings are vertices, hence scaled permutations), and
  2. move every support atom to the coupling-weighted average of the atoms
     it is matched with.

Step 2 minimizes the functional exactly for fixed couplings and step 1 for
fixed support, so the functional is non-increasing and the iteration
terminates at a partial optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Coupling, DiscreteMeasure, cost_matrix
from .simplex import solve_transport

# A coupling whose scaled plan deviates from the nearest permutation by
# more than this is not trusted for member rearrangement.
PERMUTATION_FLAG_TOL = 1e-3
# Below this deviation the scaled plan is reported as already-exact.
PERMUTATION_CLEAN_TOL = 1e-8


@dataclass
class BarycenterResult:
    support: np.ndarray
    couplings: list[Coupling]
    functional: float
    functional_history: np.ndarray
    n_iter: int
    converged: bool


def _uniform_atoms(measures: list[DiscreteMeasure]) -> tuple[int, int]:
    if not measures:
        raise ValueError("need at least one measure")
    n_atoms = measures[0].n_atoms
    dim = measures[0].dim
    for k, nu in enumerate(measures):
        if nu.n_atoms != n_atoms or nu.dim != dim:
            raise ValueError(f"measure {k} has shape ({nu.n_atoms}, {nu.dim}), expected ({n_atoms}, {dim})")
        if np.abs(nu.weights - 1.0 / n_atoms).max() > 1e-9:
            raise ValueError(f"measure {k} is not uniform")
    return n_atoms, dim


def barycenter(measures: list[DiscreteMeasure], tol: float = 1e-10, max_iter: int = 100) -> BarycenterResult:
    """Uniform free-support barycenter of uniform measures.

    The support is initialized to the atom-wise average of the clouds under
    the identity correspondence, which is already optimal whenever the
    clouds are translates with aligned member indices (the filter's common
    case).  Returned couplings are the exact transport plans between the
    final support and each input.
    """
    n_atoms, _ = _uniform_atoms(measures)
    uniform = np.full(n_atoms, 1.0 / n_atoms)
    support = np.mean([nu.locations for nu in measures], axis=0)

    history = []
    couplings: list[Coupling] = []
    previous = np.inf
    converged = False
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        couplings = [
            solve_transport(cost_matrix(support, nu.locations), uniform, uniform)
            for nu in measures
        ]
        functional = float(sum(c.objective for c in couplings))
        history.append(functional)
        if previous - functional <= tol:
            converged = True
            break
        previous = functional
        # Atom-wise minimizer for fixed couplings: rows of n_atoms * T sum
        # to one, so each support point is a convex combination.
        support = np.mean(
            [n_atoms * (c.plan @ nu.locations) for c, nu in zip(couplings, measures)],
            axis=0,
        )
    return BarycenterResult(
        support=support,
        couplings=couplings,
        functional=history[-1],
        functional_history=np.asarray(history),
        n_iter=n_iter,
        converged=converged,
    )


@dataclass
class PermutationExtraction:
    """Permutations recovered from couplings between uniform measures."""

    permutations: list[np.ndarray]  # (M, M) 0/1 arrays
    assignments: list[np.ndarray]  # index form: row j is matched to column assignments[j]
    deviations: np.ndarray  # max |M * plan - permutation| per coupling
    rounded: np.ndarray  # deviation above PERMUTATION_CLEAN_TOL
    flagged: np.ndarray  # deviation above PERMUTATION_FLAG_TOL: do not trust

    @property
    def any_flagged(self) -> bool:
        return bool(self.flagged.any())


def _greedy_assignment(scaled: np.ndarray) -> np.ndarray:
    """Row-wise greedy: each row takes its largest still-unused column."""
    n = scaled.shape[0]
    taken = np.zeros(n, dtype=bool)
    assignment = np.empty(n, dtype=int)
    for i in range(n):
        order = np.argsort(-scaled[i])
        for j in order:
            if not taken[j]:
                assignment[i] = j
                taken[j] = True
                break
    return assignment


def extract_permutations(couplings: list[Coupling], n_atoms: int) -> PermutationExtraction:
    """Read permutation matrices P = M * T off couplings of uniform measures.

    Vertex couplings between two uniform M-atom measures are scaled
    permutation matrices, so P is exact up to roundoff.  Non-vertex plans
    (e.g. from the entropic solver) are rounded to the nearest permutation
    by greedy row-wise assignment and flagged when the pre-rounding
    deviation exceeds ``PERMUTATION_FLAG_TOL``; the caller decides whether
    a flagged permutation is still usable.
    """
    permutations = []
    assignments = []
    deviations = np.empty(len(couplings))
    for k, coupling in enumerate(couplings):
        plan = coupling.plan
        if plan.shape != (n_atoms, n_atoms):
            raise ValueError(f"coupling {k} has shape {plan.shape}, expected ({n_atoms}, {n_atoms})")
        scaled = n_atoms * plan
        assignment = _greedy_assignment(scaled)
        matrix = np.zeros((n_atoms, n_atoms))
        matrix[np.arange(n_atoms), assignment] = 1.0
        deviations[k] = float(np.abs(scaled - matrix).max())
        permutations.append(matrix)
        assignments.append(assignment)
    rounded = deviations > PERMUTATION_CLEAN_TOL
    flagged = deviations > PERMUTATION_FLAG_TOL
    return PermutationExtraction(
        permutations=permutations,
        assignments=assignments,
        deviations=deviations,
        rounded=rounded,
        flagged=flagged,
    )
