"""Interval partitions of lattice paths hitting half the displacement.

Given a path and k, the search looks for parameters t1 <= s1 <= ... <=
tk <= sk (half-unit grid, doubled coordinates) with

    sum_i (point(s_i) - point(t_i)) = (point(end) - point(start)) / 2.

For k = floor((n+1)/2) such breakpoints always exist; the search is
exhaustive, so failure would falsify the construction rather than the
input, and raises InternalInvariantError with a diagnostic payload.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .zn import LatticePath, Vec, l1, vsub


class InternalInvariantError(RuntimeError):
    """An exhaustive search came up empty where existence is guaranteed."""

    def __init__(self, message: str, payload: dict):
        super().__init__(f"{message}: {payload!r}")
        self.payload = payload


@dataclass(frozen=True)
class SegmentPartition:
    """Breakpoints (t1, s1, ..., tk, sk) on the doubled parameter grid."""

    path: LatticePath
    k: int
    breakpoints: tuple[int, ...]

    def __post_init__(self):
        if len(self.breakpoints) != 2 * self.k:
            raise ValueError(
                f"expected {2 * self.k} breakpoints, got {len(self.breakpoints)}"
            )
        if any(b > a for a, b in zip(self.breakpoints[1:], self.breakpoints)):
            raise ValueError(f"breakpoints not ordered: {self.breakpoints}")

    @cached_property
    def intervals(self) -> tuple[tuple[int, int], ...]:
        bp = self.breakpoints
        return tuple((bp[2 * i], bp[2 * i + 1]) for i in range(self.k))

    def sum_of_differences(self) -> Vec:
        total = (0,) * self.path.n
        for t, s in self.intervals:
            total = tuple(
                a + b for a, b in zip(total, vsub(self.path.point(s), self.path.point(t)))
            )
        return total

    def satisfies_identity(self) -> bool:
        """2 * sum of interval differences equals end minus start, exactly."""
        whole = vsub(self.path.point(2 * len(self.path)), self.path.point(0))
        return tuple(2 * c for c in self.sum_of_differences()) == whole

    def to_json_dict(self) -> dict:
        return {"breakpoints": list(self.breakpoints), "doubled": True}


def burago_partition(path: LatticePath, k: int) -> SegmentPartition:
    """Lexicographically smallest breakpoint tuple hitting half the displacement.

    Depth-first search over ordered breakpoints, pruned by an l1 budget
    (consecutive grid points differ by exactly 1 in l1, so the remaining
    intervals can cover at most the remaining parameter range) and by a
    memo of infeasible (pair, position, remainder) states. Branches are
    visited in increasing order, so the first hit is the lexicographic
    minimum.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    end = 2 * len(path)
    whole = vsub(path.point(end), path.point(0))
    # lattice endpoints have even coordinates, so the halving is exact
    target = tuple(c // 2 for c in whole)
    dead: set[tuple[int, int, Vec]] = set()
    chosen: list[int] = []

    def search(pair: int, lo: int, remaining: Vec) -> bool:
        if pair == k:
            return remaining == (0,) * path.n
        if l1(remaining) > end - lo:
            return False
        state = (pair, lo, remaining)
        if state in dead:
            return False
        for t in range(lo, end + 1):
            pt = path.point(t)
            for s in range(t, end + 1):
                diff = vsub(path.point(s), pt)
                chosen.append(t)
                chosen.append(s)
                if search(pair + 1, s, vsub(remaining, diff)):
                    return True
                chosen.pop()
                chosen.pop()
        dead.add(state)
        return False

    if not search(0, 0, target):
        raise InternalInvariantError(
            "no breakpoint tuple reaches half the displacement",
            {
                "n": path.n,
                "start": path.start,
                "steps": path.steps,
                "k": k,
                "target_doubled": target,
            },
        )
    return SegmentPartition(path, k, tuple(chosen))
