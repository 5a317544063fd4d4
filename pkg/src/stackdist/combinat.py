"""Arbitrary-precision counting primitives used by every pipeline.

Counts are plain Python ``int`` (arbitrary precision by construction).
Exact probabilities and series coefficients are ``fractions.Fraction``.
The aliases below make that contract explicit at module boundaries.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

BigCount = int
ExactRatio = Fraction

# Rows up to this n are memoized as dense tuples; larger arguments fall back
# to direct evaluation.  1200 covers every table built by the package.
ROW_CAP = 1200


@lru_cache(maxsize=None)
def _row(n: int) -> tuple[int, ...]:
    return tuple(comb(n, j) for j in range(n + 1))


def binomial(n: int, k: int) -> BigCount:
    """Binomial coefficient with the counting convention: 0 out of range."""
    if n < 0 or k < 0 or k > n:
        return 0
    if n <= ROW_CAP:
        return _row(n)[k]
    return comb(n, k)


def placement_multinomial(n: int, j1: int, j2: int, j3: int) -> BigCount:
    """Ways to choose j1 unit arcs, j2 two-arcs and j3 three-arcs on [n].

    Each two-arc occupies one extra gap vertex and each three-arc two, so
    this is the multinomial (n-j1-2*j2-3*j3; j1, j2, j3, rest) with
    rest = n-2*j1-3*j2-4*j3, and 0 whenever any entry is negative.
    """
    top = n - j1 - 2 * j2 - 3 * j3
    rest = n - 2 * j1 - 3 * j2 - 4 * j3
    if j1 < 0 or j2 < 0 or j3 < 0 or top < 0 or rest < 0:
        return 0
    return binomial(top, j1) * binomial(top - j1, j2) * binomial(top - j1 - j2, j3)


def double_factorial_odd(n: int) -> BigCount:
    """(2n-1)!! = number of perfect matchings on 2n unrestricted vertices."""
    out = 1
    for m in range(1, 2 * n, 2):
        out *= m
    return out
