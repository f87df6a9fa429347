"""Independent brute-force oracles used to validate the library's fast paths.

Everything here is deliberately naive: depth-first path enumeration plus
maximum set packing for disjoint-path counts, and a direct sum over all crash
sets for crash probabilities.  None of it shares code with the implementations
it checks.
"""

from __future__ import annotations

from itertools import combinations

from maskquorum.paths import TriGrid


def simple_crossing_paths(grid: TriGrid, alive_mask: int, orientation: str) -> list[int]:
    """All simple open crossing paths, as vertex bitmasks."""
    side = grid.side
    if orientation == "LR":
        sources = [grid.index(k, 0) for k in range(side)]
        def at_sink(v): return v % side == side - 1
    else:
        sources = [grid.index(0, k) for k in range(side)]
        def at_sink(v): return v // side == side - 1
    paths: list[int] = []

    def dfs(v: int, used: int) -> None:
        if at_sink(v):
            paths.append(used)
            return
        for w in grid.neighbors(v):
            if (alive_mask >> w) & 1 and not (used >> w) & 1:
                dfs(w, used | (1 << w))

    for s in sources:
        if (alive_mask >> s) & 1:
            dfs(s, 1 << s)
    return paths


def packing_disjoint_paths(grid: TriGrid, alive_mask: int, orientation: str) -> int:
    """Maximum number of pairwise vertex-disjoint open crossing paths, by
    exhaustive packing over the enumerated simple paths."""
    paths = sorted(set(simple_crossing_paths(grid, alive_mask, orientation)),
                   key=lambda m: m.bit_count())
    best = 0
    total = len(paths)

    def rec(i: int, used: int, count: int) -> None:
        nonlocal best
        best = max(best, count)
        if best == grid.side:
            return
        for j in range(i, total):
            if not paths[j] & used:
                rec(j + 1, used | paths[j], count + 1)

    rec(0, 0, 0)
    return best


def brute_crash_probability(n: int, quorum_masks: list[int], p: float) -> float:
    """Direct sum over all 2^n crash sets of the killing configurations."""
    total = 0.0
    for crash in range(1 << n):
        alive = ((1 << n) - 1) & ~crash
        if not any(q & ~alive == 0 for q in quorum_masks):
            d = crash.bit_count()
            total += p ** d * (1.0 - p) ** (n - d)
    return total


def brute_resilience(n: int, quorum_masks: list[int]) -> int:
    """Largest k such that every k-subset leaves some quorum untouched."""
    f = -1
    for k in range(n + 1):
        if all(any(q & _mask(kill) == 0 for q in quorum_masks)
               for kill in combinations(range(n), k)):
            f = k
        else:
            break
    return f


def _mask(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out
