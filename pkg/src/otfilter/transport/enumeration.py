"""Brute-force transport oracle: exhaustive vertex enumeration.

Vertices of the transportation polytope correspond to spanning trees of the
complete bipartite supply/demand graph whose flows, solved from the
marginal constraints, are nonnegative.  Enumerating every candidate basis
is exponential and only meant for small instances (L1, L2 <= 6), where it
provides a check of the simplex solver that shares none of its machinery:
flows here come from a dense least-squares solve of the constraint system.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from ..errors import TransportError
from .core import validate_marginals


def _is_spanning_tree(cells, n_rows: int, n_cols: int) -> bool:
    n_nodes = n_rows + n_cols
    if len(cells) != n_nodes - 1:
        return False
    parent = list(range(n_nodes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in cells:
        ri, rj = find(i), find(n_rows + j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def _basis_flows(cells, w1, w2, n_rows, n_cols):
    """Solve the marginal constraints restricted to the basis cells."""
    n_basis = len(cells)
    system = np.zeros((n_rows + n_cols, n_basis))
    for k, (i, j) in enumerate(cells):
        system[i, k] = 1.0
        system[n_rows + j, k] = 1.0
    rhs = np.concatenate([w1, w2])
    flows, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    if np.abs(system @ flows - rhs).max() > 1e-10:
        return None
    return flows


def enumerate_vertices(w1, w2, n_rows: int, n_cols: int, feasibility_tol: float = 1e-12):
    """Yield every vertex plan of the transportation polytope."""
    w1 = np.asarray(w1, dtype=float)
    w2 = np.asarray(w2, dtype=float)
    cells = [(i, j) for i in range(n_rows) for j in range(n_cols)]
    seen = set()
    for basis in combinations(cells, n_rows + n_cols - 1):
        if not _is_spanning_tree(basis, n_rows, n_cols):
            continue
        flows = _basis_flows(basis, w1, w2, n_rows, n_cols)
        if flows is None or flows.min() < -feasibility_tol:
            continue
        plan = np.zeros((n_rows, n_cols))
        for (i, j), flow in zip(basis, flows):
            plan[i, j] = max(flow, 0.0)
        key = tuple(np.round(plan.ravel(), 12))
        if key in seen:
            continue
        seen.add(key)
        yield plan


def brute_force_transport(cost, w1, w2):
    """Minimum-cost vertex by exhaustive enumeration.

    Returns (best_plan, best_objective).
    """
    cost, w1, w2 = validate_marginals(cost, w1, w2)
    n_rows, n_cols = cost.shape
    if n_rows + n_cols > 12:
        raise ValueError("exhaustive enumeration is limited to L1 + L2 <= 12")
    best_plan = None
    best_objective = np.inf
    for plan in enumerate_vertices(w1, w2, n_rows, n_cols):
        objective = float(np.sum(plan * cost))
        if objective < best_objective:
            best_objective = objective
            best_plan = plan
    if best_plan is None:
        raise TransportError("no feasible vertex found")
    return best_plan, best_objective
