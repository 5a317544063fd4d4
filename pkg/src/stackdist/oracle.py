"""Ground-truth enumeration of diagrams at small n.

Every counting formula in the package is validated against the functions
here, which do nothing but walk all partial matchings on [n] (recursing on
the smallest unused vertex, so each diagram is produced exactly once) and
apply the structure filters literally.  The recursion prunes arc length at
generation time; crossing and stack filters run at the leaves, cheapest
first.  Enumeration refuses to run past a configurable cap on n.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from stackdist.combinat import BigCount
from stackdist.errors import CapExceededError, InvalidParameterError

DEFAULT_CAP = 14

Arc = tuple[int, int]


@dataclass(frozen=True)
class Diagram:
    """Arcs over [n], each vertex in at most one arc, stored sorted."""

    n: int
    arcs: tuple[Arc, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for i, j in self.arcs:
            if not (1 <= i < j <= self.n):
                raise InvalidParameterError(f"arc ({i},{j}) outside [1,{self.n}]")
            if i in seen or j in seen:
                raise InvalidParameterError(f"vertex reused by arc ({i},{j})")
            seen.add(i)
            seen.add(j)
        object.__setattr__(self, "arcs", tuple(sorted(self.arcs)))


@dataclass(frozen=True)
class StructureFilter:
    """Admissibility test: crossing bound, stack length, arc length, arc bans."""

    k: int
    tau: int = 1
    lambda_min: int = 1
    forbid_one_arcs: bool = False
    forbid_beta: bool = False

    def __post_init__(self):
        if self.k < 2:
            raise InvalidParameterError(f"crossing bound k must be >= 2, got {self.k}")
        if self.tau < 1:
            raise InvalidParameterError(f"stack bound tau must be >= 1, got {self.tau}")
        if self.lambda_min < 1:
            raise InvalidParameterError(f"lambda_min must be >= 1, got {self.lambda_min}")

    @property
    def min_arc_length(self) -> int:
        return max(self.lambda_min, 2 if self.forbid_one_arcs else 1)


def _crosses(a: Arc, b: Arc) -> bool:
    if a[0] > b[0]:
        a, b = b, a
    return a[0] < b[0] < a[1] < b[1]


def _has_crossing_family(arcs: list[Arc], k: int) -> bool:
    """True iff some k arcs are pairwise crossing."""
    if len(arcs) < k:
        return False
    for combo in combinations(arcs, k):
        if all(_crosses(a, b) for a, b in combinations(combo, 2)):
            return True
    return False


def max_mutually_crossing(diagram: Diagram) -> int:
    """Size of the largest set of pairwise crossing arcs."""
    arcs = list(diagram.arcs)
    for size in range(len(arcs), 1, -1):
        if _has_crossing_family(arcs, size):
            return size
    return 1 if arcs else 0


def _stack_runs(arcs: list[Arc]) -> list[list[Arc]]:
    present = set(arcs)
    runs = []
    for i, j in sorted(arcs):
        if (i - 1, j + 1) not in present:
            run = [(i, j)]
            step = 1
            while (i + step, j - step) in present:
                run.append((i + step, j - step))
                step += 1
            runs.append(run)
    return runs


def stack_decomposition(diagram: Diagram) -> list[list[Arc]]:
    """Maximal runs of parallel arcs ((i,j),(i+1,j-1),...), left to right."""
    return _stack_runs(list(diagram.arcs))


def _is_beta(arc: Arc, touched: set[int]) -> bool:
    i, j = arc
    if j - i == 2:
        return (i + 1) not in touched
    if j - i == 3:
        return (i + 1) not in touched and (i + 2) not in touched
    return False


def _check_cap(n: int, cap: int | None):
    limit = DEFAULT_CAP if cap is None else cap
    if n > limit:
        raise CapExceededError(
            f"brute-force enumeration capped at n={limit}; refusing n={n}"
        )
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}")


def _matchings(n: int, min_len: int) -> Iterator[list[Arc]]:
    """Yield every partial matching on [n] with all arc lengths >= min_len.

    The yielded list is reused between yields; callers must not retain it.
    """
    arcs: list[Arc] = []
    used = [False] * (n + 2)

    def rec(i: int) -> Iterator[list[Arc]]:
        while i <= n and used[i]:
            i += 1
        if i > n:
            yield arcs
            return
        used[i] = True
        yield from rec(i + 1)
        for j in range(i + min_len, n + 1):
            if not used[j]:
                used[j] = True
                arcs.append((i, j))
                yield from rec(i + 1)
                arcs.pop()
                used[j] = False
        used[i] = False

    yield from rec(1)


def stack_counts_exhaustive(
    n: int, filt: StructureFilter, cap: int | None = None
) -> dict[int, BigCount]:
    """Tally admissible diagrams by their number of maximal stacks."""
    _check_cap(n, cap)
    counts: dict[int, BigCount] = {}
    for arcs in _matchings(n, filt.min_arc_length):
        runs = _stack_runs(arcs)
        if any(len(r) < filt.tau for r in runs):
            continue
        if filt.forbid_beta and arcs:
            touched = {v for arc in arcs for v in arc}
            if any(_is_beta(a, touched) for a in arcs):
                continue
        if _has_crossing_family(arcs, filt.k):
            continue
        t = len(runs)
        counts[t] = counts.get(t, 0) + 1
    return counts


def arc_counts_exhaustive(
    n: int, filt: StructureFilter, cap: int | None = None
) -> dict[int, BigCount]:
    """Tally admissible diagrams by their number of arcs."""
    _check_cap(n, cap)
    counts: dict[int, BigCount] = {}
    for arcs in _matchings(n, filt.min_arc_length):
        if filt.tau > 1:
            if any(len(r) < filt.tau for r in _stack_runs(arcs)):
                continue
        if filt.forbid_beta and arcs:
            touched = {v for arc in arcs for v in arc}
            if any(_is_beta(a, touched) for a in arcs):
                continue
        if _has_crossing_family(arcs, filt.k):
            continue
        h = len(arcs)
        counts[h] = counts.get(h, 0) + 1
    return counts


def core_counts_exhaustive(n: int, k: int, cap: int | None = None) -> dict[int, BigCount]:
    """Tally cores: unit stacks only, no 1-arcs, no beta arcs, by arc count."""
    _check_cap(n, cap)
    if k < 2:
        raise InvalidParameterError(f"crossing bound k must be >= 2, got {k}")
    counts: dict[int, BigCount] = {}
    for arcs in _matchings(n, 2):
        present = set(arcs)
        if any((i + 1, j - 1) in present for i, j in arcs):
            continue
        if arcs:
            touched = {v for arc in arcs for v in arc}
            if any(_is_beta(a, touched) for a in arcs):
                continue
        if _has_crossing_family(arcs, k):
            continue
        t = len(arcs)
        counts[t] = counts.get(t, 0) + 1
    return counts


def count_beta_free_exhaustive(n: int, k: int, h: int, cap: int | None = None) -> BigCount:
    """k-noncrossing diagrams with h arcs, no 1-arcs and no beta arcs."""
    filt = StructureFilter(k=k, forbid_one_arcs=True, forbid_beta=True)
    return arc_counts_exhaustive(n, filt, cap).get(h, 0)


def count_cores_exhaustive(n: int, k: int, t: int, cap: int | None = None) -> BigCount:
    return core_counts_exhaustive(n, k, cap).get(t, 0)


def involutions(n: int) -> BigCount:
    """Number of partial matchings on [n] (recurrence I(n)=I(n-1)+(n-1)I(n-2))."""
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}")
    prev, cur = 1, 1
    for m in range(2, n + 1):
        prev, cur = cur, cur + (m - 1) * prev
    return cur if n else 1
