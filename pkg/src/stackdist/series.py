"""Formal power series pipeline: the second, independent route to the counts.

Everything here is exact arithmetic on truncated series.  The univariate
series of structure totals and the bivariate refinement by stack number are
both built from the matching generating function through one substitution:

    total(x)      = (1/v) * G(w * x**2 / v**2)        with the plain kernel
    refined(x, u) = (1/v) * G(u0 * x**2 / v**2)       with the u-marked kernel

where G(y) = sum_n perfect(k, n) y**n, the kernels are

    w(x)     = x**(2*tau-2) / (1 - x**2 + x**(2*tau))
    u0(x, u) = u * x**(2*tau-2) / (1 - x**2 + u * x**(2*tau))

and v = 1 - x + kernel*(x**2 + x**3 + x**4).  Substituting the square of the
argument avoids square roots entirely: the matching series is even, so only
G in y = (kernel) * x**2 / v**2 is ever needed.

Coefficients are Fractions (univariate) or dense polynomials in the stack
marker u with Fraction coefficients (bivariate).  Denominators always carry
a unit constant term, so reciprocals stay inside the ring and the integer
coefficients of the final series emerge with denominator one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from stackdist.combinat import ExactRatio
from stackdist.errors import InvalidParameterError
from stackdist.exact import CountTable
from stackdist.matchings import MatchingTable


class UPoly:
    """Dense polynomial in the stack marker u with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, value) -> "UPoly":
        return cls((value,))

    @classmethod
    def monomial(cls, degree: int, value=1) -> "UPoly":
        return cls((0,) * degree + (value,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, t: int) -> ExactRatio:
        if 0 <= t < len(self.coeffs):
            return self.coeffs[t]
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "UPoly") -> "UPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UPoly(out)

    def __neg__(self) -> "UPoly":
        return UPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "UPoly") -> "UPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, UPoly):
            if not self.coeffs or not other.coeffs:
                return _UP_ZERO
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
            return UPoly(out)
        return UPoly(tuple(c * other for c in self.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "UPoly":
        if len(self.coeffs) != 1 or not self.coeffs[0]:
            raise InvalidParameterError(
                "only nonzero constant polynomials are invertible in the u-ring"
            )
        return UPoly((1 / self.coeffs[0],))

    def at_one(self) -> ExactRatio:
        return sum(self.coeffs, Fraction(0))

    def __repr__(self) -> str:
        return f"UPoly({list(self.coeffs)!r})"


_UP_ZERO = UPoly()
_UP_ONE = UPoly((1,))


class _SeriesBase:
    """Truncated series over an exact coefficient ring; all ops keep order N."""

    __slots__ = ("coeffs", "order")
    ZERO: object = None
    ONE: object = None

    def __init__(self, coeffs, order: int):
        if order < 0:
            raise InvalidParameterError(f"order must be >= 0, got {order}")
        cs = list(coeffs)[: order + 1]
        cs += [self.ZERO] * (order + 1 - len(cs))
        self.coeffs = cs
        self.order = order

    @classmethod
    def zero(cls, order: int):
        return cls((), order)

    @classmethod
    def one(cls, order: int):
        return cls((cls.ONE,), order)

    def coefficient(self, n: int):
        return self.coeffs[n] if 0 <= n <= self.order else self.ZERO

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def _assert_compatible(self, other):
        if type(other) is not type(self) or other.order != self.order:
            raise InvalidParameterError("series orders/rings must match")

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __add__(self, other):
        self._assert_compatible(other)
        return type(self)(
            [a + b for a, b in zip(self.coeffs, other.coeffs)], self.order
        )

    def __neg__(self):
        return type(self)([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        self._assert_compatible(other)
        return type(self)(
            [a - b for a, b in zip(self.coeffs, other.coeffs)], self.order
        )

    def scaled(self, factor):
        """Coefficientwise multiplication by one ring element."""
        return type(self)([c * factor for c in self.coeffs], self.order)

    def __mul__(self, other):
        self._assert_compatible(other)
        n = self.order
        out = [self.ZERO] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return type(self)(out, n)

    def x_shift(self, m: int):
        """Multiply by x**m (truncating at the order)."""
        if m < 0:
            raise InvalidParameterError("shift must be nonnegative")
        if m > self.order:
            return type(self).zero(self.order)
        return type(self)([self.ZERO] * m + self.coeffs[: self.order + 1 - m], self.order)

    @staticmethod
    def _invert_coefficient(c):
        raise NotImplementedError

    def reciprocal(self):
        """Multiplicative inverse; requires an invertible constant term."""
        inv0 = self._invert_coefficient(self.coeffs[0])
        n = self.order
        out = [self.ZERO] * (n + 1)
        out[0] = inv0
        for m in range(1, n + 1):
            acc = self.ZERO
            for i in range(1, m + 1):
                a = self.coeffs[i]
                b = out[m - i]
                if a and b:
                    acc = acc + a * b
            out[m] = -(inv0 * acc) if acc else self.ZERO
        return type(self)(out, n)


class PowerSeries(_SeriesBase):
    """Series with Fraction coefficients."""

    ZERO = Fraction(0)
    ONE = Fraction(1)

    @staticmethod
    def _invert_coefficient(c):
        if not c:
            raise InvalidParameterError("reciprocal requires a nonzero constant term")
        return 1 / c


class BivariateSeries(_SeriesBase):
    """Series in x whose coefficients are polynomials in the stack marker u."""

    ZERO = _UP_ZERO
    ONE = _UP_ONE

    @staticmethod
    def _invert_coefficient(c):
        return c.inverse()

    def coefficient_ut(self, n: int, t: int) -> ExactRatio:
        """The exact coefficient of x**n u**t."""
        return self.coefficient(n).coefficient(t)

    def u_degree(self, n: int) -> int:
        return self.coefficient(n).degree

    def at_u1(self) -> PowerSeries:
        """Specialize the stack marker to 1."""
        return PowerSeries([c.at_one() for c in self.coeffs], self.order)


def lift(series: PowerSeries, order: int | None = None) -> BivariateSeries:
    """View a plain series as a bivariate one with constant u-polynomials."""
    n = series.order if order is None else order
    return BivariateSeries([UPoly.const(c) for c in series.coeffs[: n + 1]], n)


def compose(outer: PowerSeries, inner):
    """Substitute `inner` (zero constant term) into a scalar outer series."""
    if inner.coeffs[0]:
        raise InvalidParameterError("composition requires a zero constant term")
    val = inner.valuation()
    result = type(inner).zero(inner.order)
    if val is None:
        top = 0
    else:
        top = min(inner.order // val, outer.order)
    for p in range(top, -1, -1):
        result = result * inner
        g = outer.coefficient(p)
        if g:
            result.coeffs[0] = result.coeffs[0] + inner.ONE * g
    return result


def pair_series(k: int, order: int, table: MatchingTable | None = None) -> PowerSeries:
    """G(y) = sum_n perfect(k, n) y**n, truncated at the given order."""
    table = table or MatchingTable()
    counts = table.ensure(k, order)
    return PowerSeries([Fraction(c) for c in counts[: order + 1]], order)


def matching_series(k: int, order: int, table: MatchingTable | None = None) -> PowerSeries:
    """Matching counts as a series in x: perfect(k, n) sits at x**(2n)."""
    if order < 0:
        raise InvalidParameterError(f"order must be >= 0, got {order}")
    table = table or MatchingTable()
    counts = table.ensure(k, order // 2)
    coeffs = [Fraction(0)] * (order + 1)
    for n in range(order // 2 + 1):
        coeffs[2 * n] = Fraction(counts[n])
    return PowerSeries(coeffs, order)


def _require_series_params(k: int, tau: int):
    if k < 2:
        raise InvalidParameterError(f"crossing bound k must be >= 2, got {k}")
    if tau < 3:
        raise InvalidParameterError(f"series pipeline requires tau >= 3, got {tau}")


def plain_kernel(tau: int, order: int) -> PowerSeries:
    """w(x) = x**(2*tau-2) / (1 - x**2 + x**(2*tau))."""
    den = PowerSeries.zero(order)
    den.coeffs[0] = Fraction(1)
    if order >= 2:
        den.coeffs[2] = Fraction(-1)
    if order >= 2 * tau:
        den.coeffs[2 * tau] += Fraction(1)
    return den.reciprocal().x_shift(2 * tau - 2)


def marked_kernel(tau: int, order: int) -> BivariateSeries:
    """u0(x, u) = u * x**(2*tau-2) / (1 - x**2 + u * x**(2*tau))."""
    den = BivariateSeries.zero(order)
    den.coeffs[0] = _UP_ONE
    if order >= 2:
        den.coeffs[2] = -_UP_ONE
    if order >= 2 * tau:
        den.coeffs[2 * tau] = den.coeffs[2 * tau] + UPoly.monomial(1)
    return den.reciprocal().scaled(UPoly.monomial(1)).x_shift(2 * tau - 2)


def _assemble(kernel, order: int, k: int, tau: int, table: MatchingTable | None):
    cls = type(kernel)
    v = cls.zero(order)
    v.coeffs[0] = cls.ONE
    if order >= 1:
        v.coeffs[1] = -cls.ONE
    window = cls.zero(order)
    for m in (2, 3, 4):
        if m <= order:
            window.coeffs[m] = cls.ONE
    v = v + kernel * window
    r = v.reciprocal()
    argument = (kernel * r * r).x_shift(2)
    outer = pair_series(k, order // (2 * tau), table)
    return r * compose(outer, argument)


def structure_series(
    k: int, tau: int, order: int, table: MatchingTable | None = None
) -> PowerSeries:
    """Series of structure totals: the x**n coefficient counts all admissible
    structures on [n] (every stack of length >= tau, fewer than k mutually
    crossing arcs, arc length >= 4)."""
    _require_series_params(k, tau)
    return _assemble(plain_kernel(tau, order), order, k, tau, table)


def stack_series(
    k: int, tau: int, order: int, table: MatchingTable | None = None
) -> BivariateSeries:
    """Bivariate refinement: coefficient of x**n u**t counts structures on [n]
    with exactly t stacks."""
    _require_series_params(k, tau)
    return _assemble(marked_kernel(tau, order), order, k, tau, table)


@dataclass
class IdentityCheck:
    name: str
    holds: bool
    first_mismatch: tuple[int, int] | None = None

    def __str__(self) -> str:
        if self.holds:
            return f"{self.name}: holds"
        return f"{self.name}: FAILS first at {self.first_mismatch}"


@dataclass
class IdentityReport:
    k: int
    tau: int
    order: int
    checks: list[IdentityCheck]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)


def _first_mismatch(a: BivariateSeries, b: BivariateSeries) -> tuple[int, int] | None:
    for n in range(a.order + 1):
        pa, pb = a.coefficient(n), b.coefficient(n)
        if pa != pb:
            top = max(pa.degree, pb.degree)
            for t in range(top + 1):
                if pa.coefficient(t) != pb.coefficient(t):
                    return (n, t)
    return None


def identity_checks(
    k: int, tau: int, order: int, counts: CountTable | None = None
) -> IdentityReport:
    """Cross-validate the counting chain against the series pipeline.

    Three coefficientwise identities, all checked exactly to the given order:

    - ``core-substitution``: summing core counts against powers of
      u*x**(2*tau-2)/(1-x**2) reproduces the bivariate structure series.
    - ``arc-substitution``: summing core counts against powers of
      u/(1-u*x**2) reproduces the beta-free arc-count series.
    - ``kernel-substitution``: summing beta-free counts against powers of
      the marked kernel u0 also reproduces the bivariate structure series.
    """
    _require_series_params(k, tau)
    counts = counts or CountTable()
    refined = stack_series(k, tau, order, counts.matchings)
    checks = []

    # core counts against the collapsed-stack substitution
    rhs = BivariateSeries.zero(order)
    sub = _geometric_even(order).scaled(UPoly.monomial(1)).x_shift(2 * (tau - 1))
    power = BivariateSeries.one(order)
    t = 0
    while t * 2 * (tau - 1) <= order:
        row = PowerSeries(
            [Fraction(counts.cores(k, n, t)) for n in range(order + 1)], order
        )
        rhs = rhs + lift(row) * power
        power = power * sub
        t += 1
    checks.append(_make_check("core-substitution", refined, rhs))

    # core counts against the arc-multiplicity substitution
    lhs = BivariateSeries(
        [
            UPoly([counts.beta_free(k, n, h) for h in range(n // 2 + 1)])
            for n in range(order + 1)
        ],
        order,
    )
    den = BivariateSeries.zero(order)
    den.coeffs[0] = _UP_ONE
    if order >= 2:
        den.coeffs[2] = -UPoly.monomial(1)
    sub = den.reciprocal().scaled(UPoly.monomial(1))
    rhs = BivariateSeries.zero(order)
    power = BivariateSeries.one(order)
    for h in range(order // 2 + 1):
        row = PowerSeries(
            [Fraction(counts.cores(k, n, h)) for n in range(order + 1)], order
        )
        rhs = rhs + lift(row) * power
        power = power * sub
    checks.append(_make_check("arc-substitution", lhs, rhs))

    # beta-free counts against the marked kernel
    kernel = marked_kernel(tau, order)
    rhs = BivariateSeries.zero(order)
    power = BivariateSeries.one(order)
    h = 0
    while h * 2 * (tau - 1) <= order:
        row = PowerSeries(
            [Fraction(counts.beta_free(k, n, h)) for n in range(order + 1)], order
        )
        rhs = rhs + lift(row) * power
        power = power * kernel
        h += 1
    checks.append(_make_check("kernel-substitution", refined, rhs))

    return IdentityReport(k=k, tau=tau, order=order, checks=checks)


def _geometric_even(order: int) -> BivariateSeries:
    """1/(1-x**2) over the u-ring."""
    den = BivariateSeries.zero(order)
    den.coeffs[0] = _UP_ONE
    if order >= 2:
        den.coeffs[2] = -_UP_ONE
    return den.reciprocal()


def _make_check(name: str, a: BivariateSeries, b: BivariateSeries) -> IdentityCheck:
    where = _first_mismatch(a, b)
    return IdentityCheck(name=name, holds=where is None, first_mismatch=where)
