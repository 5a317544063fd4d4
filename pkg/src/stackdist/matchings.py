"""Counting k-noncrossing matchings by dynamic programming over tableau walks.

Perfect matchings on 2n vertices with fewer than k mutually crossing arcs
are in bijection with closed walks of length 2n on Young diagrams having at
most k-1 rows, where every step adds or removes exactly one box.  One
forward sweep therefore fills the whole table: the weight sitting on the
empty shape after step 2j is the matching count for 2j vertices.

Partial matchings factor through the perfect table.  Isolated vertices never
participate in a crossing, so placing them is an independent binomial choice:

    partial(k, m, isolated) = C(m, isolated) * perfect(k, (m - isolated) / 2)

Shapes are canonical weakly-decreasing tuples of positive row lengths; only
two walk levels are alive at a time, and states whose box count exceeds the
steps remaining in the sweep are pruned (they cannot return to the empty
shape in time, and no shorter closed walk ever visits them either).
"""

from __future__ import annotations

from stackdist import cache
from stackdist.combinat import BigCount, binomial
from stackdist.errors import InvalidParameterError

ChamberState = tuple[int, ...]


def shape_successors(shape: ChamberState, max_rows: int) -> list[ChamberState]:
    """All shapes reachable by adding or removing one box, within max_rows."""
    out: list[ChamberState] = []
    rows = len(shape)
    for i in range(rows):
        if i == 0 or shape[i - 1] > shape[i]:
            out.append(shape[:i] + (shape[i] + 1,) + shape[i + 1 :])
    if rows < max_rows:
        out.append(shape + (1,))
    for i in range(rows):
        smaller = shape[i] - 1
        floor = shape[i + 1] if i + 1 < rows else 0
        if smaller >= floor:
            if smaller == 0:
                out.append(shape[:i])
            else:
                out.append(shape[:i] + (smaller,) + shape[i + 1 :])
    return out


def perfect_count_table(k: int, max_pairs: int) -> list[BigCount]:
    """[f(0), f(1), ..., f(max_pairs)] where f(n) counts matchings on 2n."""
    if k < 2:
        raise InvalidParameterError(f"crossing bound k must be >= 2, got {k}")
    if max_pairs < 0:
        raise InvalidParameterError(f"max_pairs must be >= 0, got {max_pairs}")
    max_rows = k - 1
    horizon = 2 * max_pairs
    level: dict[ChamberState, int] = {(): 1}
    out: list[BigCount] = [1]
    for step in range(1, horizon + 1):
        remaining = horizon - step
        nxt: dict[ChamberState, int] = {}
        for shape, ways in level.items():
            size = sum(shape)
            rows = len(shape)
            # box additions: prune states that cannot reach the empty shape
            # within the remaining steps (removals always can: size only drops)
            if size + 1 <= remaining:
                for i in range(rows):
                    if i == 0 or shape[i - 1] > shape[i]:
                        succ = shape[:i] + (shape[i] + 1,) + shape[i + 1 :]
                        nxt[succ] = nxt.get(succ, 0) + ways
                if rows < max_rows:
                    succ = shape + (1,)
                    nxt[succ] = nxt.get(succ, 0) + ways
            # box removals; a row can only empty out in the last position
            for i in range(rows):
                smaller = shape[i] - 1
                floor = shape[i + 1] if i + 1 < rows else 0
                if smaller >= floor:
                    succ = shape[:i] if smaller == 0 else shape[:i] + (smaller,) + shape[i + 1 :]
                    nxt[succ] = nxt.get(succ, 0) + ways
        level = nxt
        if step % 2 == 0:
            out.append(level.get((), 0))
    return out


class MatchingTable:
    """Per-k tables of perfect-matching counts, optionally disk-backed."""

    def __init__(self, cache_dir: str | None = None):
        self.cache_dir = cache_dir
        self._tables: dict[int, list[BigCount]] = {}

    def ensure(self, k: int, pairs: int) -> list[BigCount]:
        """Grow (and persist) the table for k until it covers `pairs`."""
        if k < 2:
            raise InvalidParameterError(f"crossing bound k must be >= 2, got {k}")
        table = self._tables.get(k)
        if table is None and self.cache_dir is not None:
            table = cache.load_table(self.cache_dir, k)
            if table is not None:
                self._tables[k] = table
        if table is None or len(table) <= pairs:
            # rebuild outright: the sweep cost is dominated by the target size
            target = max(pairs, 2 * (len(table) - 1) if table else 0, 16)
            table = perfect_count_table(k, target)
            self._tables[k] = table
            if self.cache_dir is not None:
                cache.save_table(self.cache_dir, k, table)
        return table

    def perfect(self, k: int, pairs: int) -> BigCount:
        if pairs < 0:
            raise InvalidParameterError(f"pair count must be >= 0, got {pairs}")
        return self.ensure(k, pairs)[pairs]

    def partial(self, k: int, m: int, isolated: int) -> BigCount:
        """k-noncrossing partial matchings on m vertices, `isolated` of them unpaired."""
        if k < 2:
            raise InvalidParameterError(f"crossing bound k must be >= 2, got {k}")
        if m < 0 or isolated < 0 or isolated > m or (m - isolated) % 2:
            return 0
        return binomial(m, isolated) * self.perfect(k, (m - isolated) // 2)


_DEFAULT = MatchingTable()


def count_perfect(k: int, pairs: int, table: MatchingTable | None = None) -> BigCount:
    """Number of perfect matchings on 2*pairs vertices with < k mutually crossing arcs."""
    return (table or _DEFAULT).perfect(k, pairs)


def count_partial(k: int, m: int, isolated: int, table: MatchingTable | None = None) -> BigCount:
    return (table or _DEFAULT).partial(k, m, isolated)
