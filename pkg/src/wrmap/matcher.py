"""Workload-resource matching.

Builds a predicted-cost matrix from fitted regression models and solves the
minimum-cost one-to-one assignment, producing a check-mark matrix with at
most one mark per row and per column. Among equal-cost optima the
lexicographically smallest mark set is returned, so outputs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import AllocationState, check_token
from .regression import RegressionModel, predict


class MatcherError(Exception):
    pass


class MissingModel(MatcherError):
    def __init__(self, resource: str, workload: str):
        super().__init__(f"no fitted model for pair {resource}:{workload}")
        self.resource = resource
        self.workload = workload


class NonSquare(MatcherError):
    """Rectangular cost matrix with padding disabled."""


class NotInjective(MatcherError):
    """Two resources allocated to the same workload; no matrix form exists."""


class UnknownLabel(MatcherError):
    """An allocated name is absent from the supplied row/column orders."""


@dataclass(frozen=True)
class CostMatrix:
    """Rectangular grid of predicted costs, rows=resources, cols=workloads.

    Orders are lexicographic by id; all entries finite.
    """

    resources: tuple[str, ...]
    workloads: tuple[str, ...]
    cost: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if list(self.resources) != sorted(self.resources):
            raise ValueError("resources must be in lexicographic order")
        if list(self.workloads) != sorted(self.workloads):
            raise ValueError("workloads must be in lexicographic order")
        if len(self.cost) != len(self.resources):
            raise ValueError("cost row count must match resources")
        for row in self.cost:
            if len(row) != len(self.workloads):
                raise ValueError("cost column count must match workloads")
            for value in row:
                if not isfinite(value):
                    raise ValueError("cost entries must be finite")


@dataclass(frozen=True)
class AssignmentMatrix:
    """Marks (resource-index, workload-index): at most one per row and column."""

    resources: tuple[str, ...]
    workloads: tuple[str, ...]
    marks: frozenset
    cost: Optional[CostMatrix] = None

    def __post_init__(self) -> None:
        rows = [i for i, _ in self.marks]
        cols = [j for _, j in self.marks]
        if len(rows) != len(set(rows)) or len(cols) != len(set(cols)):
            raise ValueError("at most one mark per row and per column")
        for i, j in self.marks:
            if not (0 <= i < len(self.resources) and 0 <= j < len(self.workloads)):
                raise ValueError(f"mark out of range: {(i, j)}")

    def total_cost(self) -> float:
        if self.cost is None:
            raise ValueError("no cost matrix attached")
        return float(sum(self.cost.cost[i][j] for i, j in self.marks))


def build_cost_matrix(
    models: Mapping[tuple[str, str], RegressionModel],
    resources: Sequence[str],
    workloads: Sequence[str],
    w_query: float,
) -> CostMatrix:
    """Predicted cost of each workload on each resource at demand level w_query.

    Every (resource, workload) pair must have a fitted model.
    """
    res = tuple(sorted(check_token(r) for r in resources))
    wls = tuple(sorted(check_token(w) for w in workloads))
    if len(set(res)) != len(res) or len(set(wls)) != len(wls):
        raise ValueError("duplicate resource or workload names")
    rows = []
    for r in res:
        row = []
        for w in wls:
            model = models.get((r, w))
            if model is None:
                raise MissingModel(r, w)
            row.append(predict(model, w_query))
        rows.append(tuple(row))
    return CostMatrix(res, wls, tuple(rows))


def _lex_min_assignment(cost: np.ndarray) -> list[tuple[int, int]]:
    """Minimum-cost perfect matching on a square matrix, lexicographically
    smallest mark set among optima.

    Greedy per row: fix the smallest column whose forced choice still allows
    an optimal completion of the remaining rows.
    """
    n = cost.shape[0]
    row_ind, col_ind = linear_sum_assignment(cost)
    best = float(cost[row_ind, col_ind].sum())
    tol = 1e-9 * (1.0 + abs(best))
    remaining = list(range(n))
    fixed = 0.0
    chosen: list[tuple[int, int]] = []
    for i in range(n):
        rest_rows = list(range(i + 1, n))
        for j in remaining:
            rest_cols = [c for c in remaining if c != j]
            if rest_rows:
                sub = cost[np.ix_(rest_rows, rest_cols)]
                rr, cc = linear_sum_assignment(sub)
                completion = float(sub[rr, cc].sum())
            else:
                completion = 0.0
            if fixed + cost[i, j] + completion <= best + tol:
                chosen.append((i, j))
                fixed += float(cost[i, j])
                remaining.remove(j)
                break
        else:  # pragma: no cover - square matrices are always completable
            raise RuntimeError("assignment search failed")
    return chosen


def assign(costs: CostMatrix, pad: bool = True) -> AssignmentMatrix:
    """Minimum-total-cost assignment of workloads to resources.

    Rectangular matrices are squared up with a large sentinel cost and the
    sentinel marks dropped; pass pad=False to reject rectangular input.
    """
    matrix = np.array(costs.cost, dtype=float).reshape(
        len(costs.resources), len(costs.workloads)
    )
    n_res, n_wl = matrix.shape
    if n_res != n_wl and not pad:
        raise NonSquare(f"cost matrix is {n_res}x{n_wl}")
    n = max(n_res, n_wl)
    if n == 0:
        return AssignmentMatrix(costs.resources, costs.workloads, frozenset(), costs)
    sentinel = 1.0 + n * float(np.abs(matrix).max()) if matrix.size else 1.0
    padded = np.full((n, n), sentinel)
    padded[:n_res, :n_wl] = matrix
    marks = {
        (i, j) for i, j in _lex_min_assignment(padded) if i < n_res and j < n_wl
    }
    return AssignmentMatrix(costs.resources, costs.workloads, frozenset(marks), costs)


def matrix_to_state(m: AssignmentMatrix) -> AllocationState:
    """Allocation state with each marked resource bound to its workload."""
    return AllocationState(
        tuple((m.resources[i], m.workloads[j]) for i, j in m.marks)
    )


def state_to_matrix(
    s: AllocationState, resources: Sequence[str], workloads: Sequence[str]
) -> AssignmentMatrix:
    """Render an injective allocation as a mark matrix over the given orders."""
    res = tuple(resources)
    wls = tuple(workloads)
    res_index = {r: i for i, r in enumerate(res)}
    wl_index = {w: j for j, w in enumerate(wls)}
    seen_workloads = set()
    marks = set()
    for resource, workload in s.pairs:
        if workload in seen_workloads:
            raise NotInjective(f"workload {workload} allocated to several resources")
        seen_workloads.add(workload)
        if resource not in res_index:
            raise UnknownLabel(f"resource {resource} not in row order")
        if workload not in wl_index:
            raise UnknownLabel(f"workload {workload} not in column order")
        marks.add((res_index[resource], wl_index[workload]))
    return AssignmentMatrix(res, wls, frozenset(marks))
