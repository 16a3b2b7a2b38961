"""Exact transport solver: transportation simplex with Bland's rule.

Minimizes tr(T' M) over the transportation polytope

    T >= 0,  T 1 = w1,  T' 1 = w2.

The algorithm is the classical primal simplex specialized to the bipartite
transportation structure: the basis is a spanning tree of the supply/demand
graph, duals come from a tree traversal, and a pivot exchanges the entering
cell against the bottleneck cell of the unique tree cycle.  All ties are
broken by lowest row-major cell index (Bland's rule for the entering
variable, lowest index among bottleneck cells for the leaving one), so the
returned coupling is a deterministic function of the inputs and repeated
runs are bit-identical.

The returned plan is a vertex of the polytope: at most L1 + L2 - 1 entries
are nonzero, and the basic flows are re-solved from the final tree by leaf
elimination so the marginal constraints hold to machine precision.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from ..errors import TransportError
from .core import Coupling, validate_marginals

# Entering threshold relative to the cost scale: reduced costs above
# -_PIVOT_RTOL * scale are treated as optimal.
_PIVOT_RTOL = 1e-12


def _northwest_corner(w1: np.ndarray, w2: np.ndarray) -> list[tuple[int, int]]:
    """Initial staircase basis of exactly L1 + L2 - 1 cells."""
    n_rows, n_cols = w1.shape[0], w2.shape[0]
    remaining_row = w1.astype(float).copy()
    remaining_col = w2.astype(float).copy()
    basis = []
    i = j = 0
    while True:
        basis.append((i, j))
        flow = min(remaining_row[i], remaining_col[j])
        remaining_row[i] -= flow
        remaining_col[j] -= flow
        if i == n_rows - 1 and j == n_cols - 1:
            break
        if j == n_cols - 1:
            i += 1
        elif i == n_rows - 1:
            j += 1
        elif remaining_row[i] <= remaining_col[j]:
            i += 1
        else:
            j += 1
    return basis


class _BasisTree:
    """Spanning tree over row nodes 0..L1-1 and column nodes L1..L1+L2-1."""

    def __init__(self, n_rows: int, n_cols: int, basis: list[tuple[int, int]]):
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.adjacency: list[set[int]] = [set() for _ in range(n_rows + n_cols)]
        for i, j in basis:
            self._link(i, j)

    def _link(self, i: int, j: int):
        self.adjacency[i].add(self.n_rows + j)
        self.adjacency[self.n_rows + j].add(i)

    def _unlink(self, i: int, j: int):
        self.adjacency[i].discard(self.n_rows + j)
        self.adjacency[self.n_rows + j].discard(i)

    def replace(self, entering: tuple[int, int], leaving: tuple[int, int]):
        self._unlink(*leaving)
        self._link(*entering)

    def duals(self, cost: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Solve u_i + v_j = c_ij on the tree with u_0 = 0."""
        u = np.full(self.n_rows, np.nan)
        v = np.full(self.n_cols, np.nan)
        u[0] = 0.0
        queue = deque([0])
        while queue:
            node = queue.popleft()
            for neighbor in self.adjacency[node]:
                if node < self.n_rows:
                    j = neighbor - self.n_rows
                    if np.isnan(v[j]):
                        v[j] = cost[node, j] - u[node]
                        queue.append(neighbor)
                else:
                    j = node - self.n_rows
                    if np.isnan(u[neighbor]):
                        u[neighbor] = cost[neighbor, j] - v[j]
                        queue.append(neighbor)
        if np.any(np.isnan(u)) or np.any(np.isnan(v)):
            raise TransportError("basis graph is not spanning; duals undetermined")
        return u, v

    def path(self, start_row: int, end_col: int) -> list[tuple[int, int]]:
        """Edge path from a row node to a column node (exists and is unique)."""
        target = self.n_rows + end_col
        parent = {start_row: -1}
        queue = deque([start_row])
        while queue:
            node = queue.popleft()
            if node == target:
                break
            for neighbor in self.adjacency[node]:
                if neighbor not in parent:
                    parent[neighbor] = node
                    queue.append(neighbor)
        if target not in parent:
            raise TransportError("basis graph is disconnected; no pivot cycle")
        edges = []
        node = target
        while parent[node] != -1:
            prev = parent[node]
            if prev < self.n_rows:
                edges.append((prev, node - self.n_rows))
            else:
                edges.append((node, prev - self.n_rows))
            node = prev
        edges.reverse()
        return edges


def _resolve_flows(basis: list[tuple[int, int]], w1: np.ndarray, w2: np.ndarray) -> np.ndarray:
    """Exact basic flows by leaf elimination on the tree."""
    n_rows, n_cols = w1.shape[0], w2.shape[0]
    plan = np.zeros((n_rows, n_cols))
    remaining = np.concatenate([w1.astype(float), w2.astype(float)])
    incident: list[list[tuple[int, int]]] = [[] for _ in range(n_rows + n_cols)]
    for cell in basis:
        incident[cell[0]].append(cell)
        incident[n_rows + cell[1]].append(cell)
    degree = np.array([len(cells) for cells in incident])
    alive = {cell: True for cell in basis}
    stack = [node for node in range(n_rows + n_cols) if degree[node] == 1]
    processed = 0
    while stack:
        node = stack.pop()
        if degree[node] != 1:
            continue
        cell = next(c for c in incident[node] if alive[c])
        i, j = cell
        flow = remaining[node]
        plan[i, j] = flow
        alive[cell] = False
        processed += 1
        other = n_rows + j if node == i else i
        remaining[other] -= flow
        remaining[node] = 0.0
        degree[node] -= 1
        degree[other] -= 1
        if degree[other] == 1:
            stack.append(other)
    if processed != len(basis):
        raise TransportError("basis is not a tree; flow re-solve failed")
    # Degenerate basic flows may come out a few ulp negative.
    tiny = plan.min()
    if tiny < -1e-9:
        raise TransportError(f"negative basic flow {tiny:.3e}; solver state inconsistent")
    np.clip(plan, 0.0, None, out=plan)
    return plan


def solve_transport(cost, w1, w2, max_pivots: int | None = None) -> Coupling:
    """Optimal coupling between marginals ``w1`` and ``w2`` under ``cost``.

    Parameters
    ----------
    cost : (L1, L2) array of nonnegative pairwise costs.
    w1, w2 : nonnegative marginals, each summing to 1.
    max_pivots : optional safety cap, default 50 * L1 * L2.

    Returns
    -------
    Coupling with the optimal vertex plan; ``objective`` is tr(T' M) and
    ``meta['n_pivots']`` the pivot count.
    """
    cost, w1, w2 = validate_marginals(cost, w1, w2)
    n_rows, n_cols = cost.shape
    if max_pivots is None:
        max_pivots = 50 * n_rows * n_cols + 100

    basis = _northwest_corner(w1, w2)
    basis_set = set(basis)
    tree = _BasisTree(n_rows, n_cols, basis)
    plan0 = _resolve_flows(basis, w1, w2)
    flows = {cell: plan0[cell] for cell in basis}

    threshold = -_PIVOT_RTOL * max(1.0, float(cost.max()))
    basic_mask = np.zeros((n_rows, n_cols), dtype=bool)
    for cell in basis:
        basic_mask[cell] = True

    n_pivots = 0
    while True:
        u, v = tree.duals(cost)
        reduced = cost - u[:, None] - v[None, :]
        reduced[basic_mask] = 0.0
        candidates = np.flatnonzero(reduced.ravel() < threshold)
        if candidates.size == 0:
            break
        if n_pivots >= max_pivots:
            raise TransportError(f"pivot cap {max_pivots} exceeded; possible cycling")
        # Bland's rule: lowest row-major index among improving cells.
        entering = (int(candidates[0]) // n_cols, int(candidates[0]) % n_cols)
        cycle_path = tree.path(entering[0], entering[1])
        # Walking the cycle from the entering cell, path edges alternate -,+,-,...
        minus_edges = cycle_path[0::2]
        theta = min(flows[cell] for cell in minus_edges)
        leaving = min(cell for cell in minus_edges if flows[cell] == theta)
        for k, cell in enumerate(cycle_path):
            flows[cell] += theta if k % 2 == 1 else -theta
        flows[entering] = theta
        del flows[leaving]
        basis_set.discard(leaving)
        basis_set.add(entering)
        basic_mask[leaving] = False
        basic_mask[entering] = True
        tree.replace(entering, leaving)
        n_pivots += 1

    final_basis = sorted(basis_set)
    plan = _resolve_flows(final_basis, w1, w2)
    objective = float(np.sum(plan * cost))
    coupling = Coupling(
        plan=plan,
        row_marginals=w1,
        col_marginals=w2,
        objective=objective,
        meta={"n_pivots": n_pivots, "basis": final_basis},
    )
    return coupling
