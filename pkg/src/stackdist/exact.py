"""Exact stack-number counts via inclusion-exclusion and stack re-inflation.

The chain has three stages, each consuming the previous one:

1. ``count_beta_free(k, n, h)``: k-noncrossing diagrams on [n] with h arcs,
   no 1-arcs and no beta arcs (length-2 arcs over an isolated vertex, or
   length-3 arcs over two isolated vertices).  Computed by
   inclusion-exclusion over how many banned arcs are planted: planting j1
   unit arcs, j2 two-arcs and j3 three-arcs removes 2*j1+3*j2+4*j3 vertices
   and leaves a free partial matching, so

       sum (-1)^(j1+j2+j3) * placement_multinomial(n,j1,j2,j3)
           * partial_matchings(remaining vertices, fixed isolated count)

   with the partial-matching factor C(m, iso) * perfect(h - j1 - j2 - j3).

2. ``count_cores(k, n, t)``: beta-free cores (every maximal stack is a
   single arc) with t arcs, by inverting the collapse map that flattens
   stacks, an alternating binomial sum over the first stage.

3. ``count_structures(k, tau, n, t)``: structures whose t stacks all have
   length >= tau, by re-inflating core arcs; distributing the extra arcs
   over t stacks contributes the composition count C((1-tau)t+h-1, t-1).

The triple sum in stage 1 is evaluated as three nested passes that update
the multinomial and binomial factors incrementally (each update multiplies
by a small ratio whose division is exact), instead of recomputing products
per term.  All stages are memoized; signed intermediates live in plain
ints, and every final value is asserted nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from stackdist.combinat import BigCount, ExactRatio, binomial
from stackdist.errors import ConsistencyError, InvalidParameterError
from stackdist.matchings import MatchingTable


def _beta_free_staged(n: int, h: int, perfect: list[BigCount]) -> int:
    """Signed inclusion-exclusion total for stage 1 (caller checks the sign)."""
    total = 0
    lam3 = 1  # placement multinomial at (j1=0, j2=0, j3)
    for j3 in range(h + 1):
        if j3:
            b = n - 4 * (j3 - 1)
            t = n - 3 * (j3 - 1)
            if b < 4:
                break  # bottom entry of the multinomial went negative
            lam3 = lam3 * (b * (b - 1) * (b - 2) * (b - 3)) // (j3 * t * (t - 1) * (t - 2))
        iso3 = n - 2 * h - 2 * j3  # isolated vertices at j2 = 0
        if iso3 < 0:
            break
        lam2 = lam3
        for j2 in range(h - j3 + 1):
            if j2:
                b = n - 3 * (j2 - 1) - 4 * j3
                t = n - 2 * (j2 - 1) - 3 * j3
                if b < 3:
                    break
                lam2 = lam2 * (b * (b - 1) * (b - 2)) // (j2 * t * (t - 1))
            iso = iso3 - j2
            if iso < 0:
                break
            # inner pass over j1: m = n-2*j1-3*j2-4*j3 free vertices remain,
            # C(m, iso) pairs the rest into h-j1-j2-j3 arcs
            lam = lam2
            m = n - 3 * j2 - 4 * j3
            cml = binomial(m, iso)
            parity = (j2 + j3) & 1
            for j1 in range(h - j2 - j3 + 1):
                if j1:
                    if m < 2:
                        break
                    t = n - (j1 - 1) - 2 * j2 - 3 * j3
                    lam = lam * (m * (m - 1)) // (j1 * t)
                    cml = cml * ((m - iso) * (m - iso - 1)) // (m * (m - 1))
                    m -= 2
                    parity ^= 1
                term = lam * cml * perfect[h - j1 - j2 - j3]
                total = total - term if parity else total + term
    return total


@dataclass
class StackDistribution:
    """Exact law of the stack number at size n: P(t) = count(t) / total."""

    n: int
    k: int
    tau: int
    counts: list[BigCount]
    probabilities: list[ExactRatio]
    total: BigCount


class CountTable:
    """Memoized chain of the three counting stages over one matching table."""

    def __init__(self, matchings: MatchingTable | None = None):
        self.matchings = matchings or MatchingTable()
        self._beta_free: dict[tuple[int, int, int], BigCount] = {}
        self._cores: dict[tuple[int, int, int], BigCount] = {}
        self._structures: dict[tuple[int, int, int, int], BigCount] = {}

    def beta_free(self, k: int, n: int, h: int) -> BigCount:
        if k < 2:
            raise InvalidParameterError(f"crossing bound k must be >= 2, got {k}")
        if n < 0 or h < 0:
            return 0
        if h == 0:
            return 1
        if 2 * h > n:
            return 0
        key = (k, n, h)
        value = self._beta_free.get(key)
        if value is None:
            perfect = self.matchings.ensure(k, h)
            value = _beta_free_staged(n, h, perfect)
            if value < 0:
                raise ConsistencyError(
                    f"negative inclusion-exclusion total {value} at k={k} n={n} h={h}"
                )
            self._beta_free[key] = value
        return value

    def cores(self, k: int, n: int, t: int) -> BigCount:
        if k < 2:
            raise InvalidParameterError(f"crossing bound k must be >= 2, got {k}")
        if n < 0 or t < 0:
            return 0
        if t == 0:
            return 1
        key = (k, n, t)
        value = self._cores.get(key)
        if value is None:
            value = 0
            for b in range(t):
                term = binomial(t - 1, b) * self.beta_free(k, n - 2 * t + 2 * b + 2, b + 1)
                value = value - term if (t - b - 1) & 1 else value + term
            if value < 0:
                raise ConsistencyError(
                    f"negative inversion total {value} at k={k} n={n} t={t}"
                )
            self._cores[key] = value
        return value

    def structures(self, k: int, tau: int, n: int, t: int) -> BigCount:
        if k < 2:
            raise InvalidParameterError(f"crossing bound k must be >= 2, got {k}")
        if tau < 1:
            raise InvalidParameterError(f"stack bound tau must be >= 1, got {tau}")
        if n < 0 or t < 0:
            return 0
        if t == 0:
            return 1
        key = (k, tau, n, t)
        value = self._structures.get(key)
        if value is None:
            value = 0
            for h in range(t * tau, n // 2 + 1):
                value += binomial((1 - tau) * t + h - 1, t - 1) * self.cores(
                    k, n + 2 * t - 2 * h, t
                )
            self._structures[key] = value
        return value

    def total_structures(self, k: int, tau: int, n: int) -> BigCount:
        return sum(self.structures(k, tau, n, t) for t in range(n // 2 + 1))

    def distribution(self, k: int, tau: int, n: int) -> StackDistribution:
        counts = [self.structures(k, tau, n, t) for t in range(n // 2 + 1)]
        total = sum(counts)
        probabilities = [Fraction(c, total) for c in counts]
        if sum(probabilities) != 1:
            raise ConsistencyError("probabilities do not sum to one")
        return StackDistribution(
            n=n, k=k, tau=tau, counts=counts, probabilities=probabilities, total=total
        )


def moments(dist: StackDistribution) -> tuple[ExactRatio, ExactRatio]:
    """Exact mean and variance of the stack number."""
    mean = sum((t * p for t, p in enumerate(dist.probabilities)), Fraction(0))
    second = sum((t * t * p for t, p in enumerate(dist.probabilities)), Fraction(0))
    return mean, second - mean * mean


_DEFAULT = CountTable()


def count_beta_free(k: int, n: int, h: int, table: CountTable | None = None) -> BigCount:
    """k-noncrossing diagrams on [n] with h arcs, no 1-arcs, no beta arcs."""
    return (table or _DEFAULT).beta_free(k, n, h)


def count_cores(k: int, n: int, t: int, table: CountTable | None = None) -> BigCount:
    """Beta-free k-noncrossing cores on [n] with t (unit-stack) arcs."""
    return (table or _DEFAULT).cores(k, n, t)


def count_structures(
    k: int, tau: int, n: int, t: int, table: CountTable | None = None
) -> BigCount:
    """Structures on [n] with exactly t stacks, all of length >= tau."""
    return (table or _DEFAULT).structures(k, tau, n, t)


def distribution(k: int, tau: int, n: int, table: CountTable | None = None) -> StackDistribution:
    return (table or _DEFAULT).distribution(k, tau, n)
