"""Exact maximum-weight bipartite matching (Hungarian method with potentials)."""

from __future__ import annotations

import numpy as np


def min_cost_assignment(cost: np.ndarray) -> np.ndarray:
    """Minimum-cost perfect assignment of rows to columns, ``rows <= cols``.

    Shortest augmenting paths with dual potentials, one row at a time, O(n^2 m).
    Returns ``col_of_row`` with one column index per row.
    """
    cost = np.asarray(cost, dtype=float)
    n, m = cost.shape
    if n > m:
        raise ValueError(f"need rows <= cols, got {n}x{m}")
    if n == 0:
        return np.zeros(0, dtype=int)
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix must be finite")

    # 1-based rows/cols; column 0 is the virtual root of each search
    u = np.zeros(n + 1)
    v = np.zeros(m + 1)
    row_of = np.zeros(m + 1, dtype=int)
    way = np.zeros(m + 1, dtype=int)
    for i in range(1, n + 1):
        row_of[0] = i
        j0 = 0
        minv = np.full(m + 1, np.inf)
        used = np.zeros(m + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = row_of[j0]
            free = ~used[1:]
            reduced = cost[i0 - 1] - u[i0] - v[1:]
            better = free & (reduced < minv[1:])
            minv[1:][better] = reduced[better]
            way[1:][better] = j0
            candidates = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(candidates)) + 1
            delta = candidates[j1 - 1]
            u[row_of[used]] += delta
            v[used] -= delta
            minv[1:][free] -= delta
            j0 = j1
            if row_of[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            row_of[j0] = row_of[j1]
            j0 = j1

    col_of_row = np.empty(n, dtype=int)
    for j in range(1, m + 1):
        if row_of[j]:
            col_of_row[row_of[j] - 1] = j - 1
    return col_of_row


def max_weight_matching_matrix(weights: np.ndarray) -> list[tuple[int, int]]:
    """Maximum-weight matching of a complete bipartite graph with weights >= 0.

    The matrix is padded to a square with zero-weight dummy vertices, solved as
    a min-cost perfect assignment, and dummy edges are dropped. The result is
    a list of (row, col) pairs sorted by row.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2:
        raise ValueError("weights must be a 2-D matrix")
    if w.size and w.min() < 0:
        raise ValueError("weights must be nonnegative")
    rows, cols = w.shape
    size = max(rows, cols)
    if size == 0 or min(rows, cols) == 0:
        return []
    padded = np.zeros((size, size))
    padded[:rows, :cols] = w
    # cost = top - weight keeps all costs nonnegative
    col_of_row = min_cost_assignment(padded.max() - padded)
    return [(r, int(c)) for r, c in enumerate(col_of_row) if r < rows and c < cols]
