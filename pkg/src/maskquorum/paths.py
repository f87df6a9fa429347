"""Triangulated-grid graph model and vertex-disjoint path counting.

Vertices are the cells of a side x side grid, numbered (i, j) -> i*side + j
(0-based).  Two vertices are adjacent iff one of three rules holds:
(i) same row, j2 = j1 + 1; (ii) same column, i2 = i1 + 1;
(iii) i2 = i1 - 1 and j2 = j1 + 1 (the triangulating diagonal).

max_disjoint_paths counts pairwise vertex-disjoint open paths between two
opposite sides via unit-capacity max-flow on the node-split graph (each open
vertex capacity 1, dead vertices capacity 0), which is exact by Menger's
theorem.  Paths may wander arbitrarily; monotonicity is not assumed.
"""

from __future__ import annotations

from collections import deque
from typing import Literal

import numpy as np

from .core import ElementSet
from .errors import ParameterError

__all__ = ["TriGrid", "Orientation", "LR", "TB", "max_disjoint_paths", "mpath_live"]

Orientation = Literal["LR", "TB"]
LR: Orientation = "LR"
TB: Orientation = "TB"

_ADJ_OFFSETS = ((0, 1), (1, 0), (-1, 1), (0, -1), (-1, 0), (1, -1))


class TriGrid:
    """The triangulated side x side grid (immutable)."""

    def __init__(self, side: int):
        if side < 1:
            raise ParameterError(f"grid side must be >= 1, got {side}")
        self.side = side
        self.n = side * side
        nbr: list[tuple[int, ...]] = []
        for i in range(side):
            for j in range(side):
                out = []
                for di, dj in _ADJ_OFFSETS:
                    a, b = i + di, j + dj
                    if 0 <= a < side and 0 <= b < side:
                        out.append(a * side + b)
                nbr.append(tuple(out))
        self._neighbors = tuple(nbr)

    def index(self, i: int, j: int) -> int:
        return i * self.side + j

    def coords(self, v: int) -> tuple[int, int]:
        return divmod(v, self.side)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._neighbors[v]


def _check_orientation(orientation: str) -> None:
    if orientation not in (LR, TB):
        raise ParameterError(f"orientation must be 'LR' or 'TB', got {orientation!r}")


def max_disjoint_paths(grid: TriGrid, alive: ElementSet, orientation: Orientation) -> int:
    """Maximum number of pairwise vertex-disjoint open paths across the grid.

    LR crosses from column 0 to column side-1, TB from row 0 to row side-1.
    Only vertices in ``alive`` may be used.
    """
    _check_orientation(orientation)
    if alive.n != grid.n:
        raise ParameterError(f"alive set has universe {alive.n}, grid has {grid.n}")
    side, n = grid.side, grid.n
    amask = alive.mask
    if amask == 0:
        return 0

    # Node-split flow network: v_in = v, v_out = v + n, then source/sink.
    source, sink = 2 * n, 2 * n + 1
    nv = 2 * n + 2
    head: list[int] = []
    cap: list[int] = []
    adj: list[list[int]] = [[] for _ in range(nv)]

    def add_edge(u: int, v: int) -> None:
        adj[u].append(len(head))
        head.append(v)
        cap.append(1)
        adj[v].append(len(head))
        head.append(u)
        cap.append(0)

    for v in range(n):
        if (amask >> v) & 1:
            add_edge(v, v + n)
    for u in range(n):
        if not (amask >> u) & 1:
            continue
        for v in grid.neighbors(u):
            if (amask >> v) & 1:
                add_edge(u + n, v)
    for k in range(side):
        if orientation == LR:
            src, snk = grid.index(k, 0), grid.index(k, side - 1)
        else:
            src, snk = grid.index(0, k), grid.index(side - 1, k)
        if (amask >> src) & 1:
            add_edge(source, src)
        if (amask >> snk) & 1:
            add_edge(snk + n, sink)

    # BFS augmenting paths; all capacities are 1 and the flow is <= side.
    flow = 0
    parent_edge = [-1] * nv
    while True:
        for i in range(nv):
            parent_edge[i] = -1
        parent_edge[source] = -2
        queue = deque([source])
        found = False
        while queue and not found:
            u = queue.popleft()
            for eid in adj[u]:
                v = head[eid]
                if cap[eid] > 0 and parent_edge[v] == -1:
                    parent_edge[v] = eid
                    if v == sink:
                        found = True
                        break
                    queue.append(v)
        if not found:
            return flow
        v = sink
        while v != source:
            eid = parent_edge[v]
            cap[eid] -= 1
            cap[eid ^ 1] += 1
            v = head[eid ^ 1]
        flow += 1


def mpath_live(side: int, r: int, alive: ElementSet) -> bool:
    """True iff the grid has >= r disjoint open paths in BOTH orientations."""
    if not 1 <= r <= side:
        raise ParameterError(f"need 1 <= r <= side, got r={r}, side={side}")
    grid = TriGrid(side)
    return (max_disjoint_paths(grid, alive, LR) >= r
            and max_disjoint_paths(grid, alive, TB) >= r)


# ---------------------------------------------------------------------------
# Packed-bitmask connectivity (the r = 1 case, vectorised over many alive sets)
# ---------------------------------------------------------------------------

def _side_masks(side: int, dtype) -> dict:
    n = side * side
    full = (1 << n) - 1
    col0 = sum(1 << (i * side) for i in range(side))
    col_last = sum(1 << (i * side + side - 1) for i in range(side))
    row0 = (1 << side) - 1
    row_last = row0 << (side * (side - 1))
    return {
        "full": dtype(full),
        "col0": dtype(col0),
        "col_last": dtype(col_last),
        "row0": dtype(row0 & full),
        "row_last": dtype(row_last & full),
        "not_col0": dtype(full & ~col0),
        "not_col_last": dtype(full & ~col_last),
    }


def connected_batch(masks: np.ndarray, side: int, orientation: Orientation) -> np.ndarray:
    """Vectorised crossing test: does each packed alive-mask contain an open path?

    Equivalent to ``max_disjoint_paths(...) >= 1`` for every mask; implemented
    as a bit-parallel flood fill.  Requires side*side <= 64 and masks of dtype
    uint32 (n <= 32) or uint64.
    """
    _check_orientation(orientation)
    n = side * side
    if n > 64:
        raise ParameterError("connected_batch supports side*side <= 64")
    dtype = masks.dtype.type
    mk = _side_masks(side, dtype)
    if orientation == LR:
        start, target = mk["col0"], mk["col_last"]
    else:
        start, target = mk["row0"], mk["row_last"]
    s1, ss, sd = dtype(1), dtype(side), dtype(side - 1)
    zero = dtype(0)

    alive = masks & mk["full"]
    reach = alive & start
    while True:
        grow = reach.copy()
        grow |= (reach << s1) & mk["not_col0"]       # (i, j+1)
        grow |= (reach >> s1) & mk["not_col_last"]   # (i, j-1)
        grow |= reach << ss                          # (i+1, j)
        grow |= reach >> ss                          # (i-1, j)
        if side > 1:
            grow |= (reach >> sd) & mk["not_col0"]       # (i-1, j+1)
            grow |= (reach << sd) & mk["not_col_last"]   # (i+1, j-1)
        grow &= alive
        if np.array_equal(grow, reach):
            return (reach & target) != zero
        reach = grow
