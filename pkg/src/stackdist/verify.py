"""Cross-validation suites wiring the pipelines against each other.

Each suite returns a :class:`SuiteReport` whose checks compare two
independent routes to the same numbers: formulas against brute force,
series against the counting chain, identities within the series ring, and
exact laws against their limiting normal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from stackdist import asymptotics, oracle, series
from stackdist.exact import CountTable


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self) -> list[str]:
        out = [c.line() for c in self.checks]
        status = "PASS" if self.passed else "FAIL"
        good = sum(c.ok for c in self.checks)
        out.append(f"{status} suite={self.suite} ({good}/{len(self.checks)} checks)")
        return out


def verify_oracle(
    k_values,
    tau_values,
    n_max: int,
    lambda_min: int = 4,
    cap: int | None = None,
    table: CountTable | None = None,
) -> SuiteReport:
    """Exact equality of the counting chain with exhaustive enumeration."""
    table = table or CountTable()
    report = SuiteReport("oracle")
    for k in k_values:
        for tau in tau_values:
            bad = None
            for n in range(n_max + 1):
                filt = oracle.StructureFilter(k=k, tau=tau, lambda_min=lambda_min)
                brute = oracle.stack_counts_exhaustive(n, filt, cap)
                for t in range(n // 2 + 1):
                    want = brute.get(t, 0)
                    got = table.structures(k, tau, n, t)
                    if want != got:
                        bad = f"n={n} t={t}: formula {got} != brute {want}"
                        break
                if bad:
                    break
            report.checks.append(
                Check(f"structures k={k} tau={tau} n<={n_max}", bad is None, bad or "")
            )
    for k in k_values:
        bad = None
        for n in range(n_max + 1):
            filt = oracle.StructureFilter(k=k, forbid_one_arcs=True, forbid_beta=True)
            brute = oracle.arc_counts_exhaustive(n, filt, cap)
            for h in range(n // 2 + 1):
                want = brute.get(h, 0) if h else 1
                got = table.beta_free(k, n, h)
                if want != got:
                    bad = f"n={n} h={h}: formula {got} != brute {want}"
                    break
            if bad:
                break
        report.checks.append(
            Check(f"beta-free k={k} n<={n_max}", bad is None, bad or "")
        )
    for k in k_values:
        bad = None
        for n in range(n_max + 1):
            brute = oracle.core_counts_exhaustive(n, k, cap)
            for t in range(n // 2 + 1):
                want = brute.get(t, 0) if t else 1
                got = table.cores(k, n, t)
                if want != got:
                    bad = f"n={n} t={t}: formula {got} != brute {want}"
                    break
            if bad:
                break
        report.checks.append(Check(f"cores k={k} n<={n_max}", bad is None, bad or ""))
    return report


def calibrate_arc_length(
    k_values=(2, 3),
    tau_values=(3, 4),
    n_range=range(9, 13),
    cap: int | None = None,
    table: CountTable | None = None,
) -> dict:
    """Determine which minimum arc-length convention the formulas realize.

    Runs the brute-force enumerator under both readings of the arc-length
    bound (j-i >= 4 and j-i >= 5) and reports which one matches the
    counting chain on every cell of the given range.
    """
    table = table or CountTable()
    outcome = {}
    for lam in (4, 5):
        matches = True
        for k in k_values:
            for tau in tau_values:
                for n in n_range:
                    filt = oracle.StructureFilter(k=k, tau=tau, lambda_min=lam)
                    brute = oracle.stack_counts_exhaustive(n, filt, cap)
                    for t in range(n // 2 + 1):
                        if table.structures(k, tau, n, t) != brute.get(t, 0):
                            matches = False
                            break
                    if not matches:
                        break
                if not matches:
                    break
            if not matches:
                break
        outcome[lam] = matches
    realized = [lam for lam, ok in outcome.items() if ok]
    outcome["realized"] = realized[0] if len(realized) == 1 else None
    return outcome


def verify_series(
    k_values,
    tau_values,
    n_max: int,
    bivariate_n_max: int | None = None,
    table: CountTable | None = None,
) -> SuiteReport:
    """Series coefficients against the counting chain, totals and per-t."""
    table = table or CountTable()
    bi_max = n_max if bivariate_n_max is None else bivariate_n_max
    report = SuiteReport("series")
    for k in k_values:
        for tau in tau_values:
            uni = series.structure_series(k, tau, n_max, table.matchings)
            bad = None
            for n in range(n_max + 1):
                coeff = uni.coefficient(n)
                if coeff.denominator != 1:
                    bad = f"n={n}: coefficient {coeff} not an integer"
                    break
                if coeff != table.total_structures(k, tau, n):
                    bad = f"n={n}: series {coeff} != chain total"
                    break
            report.checks.append(
                Check(f"univariate k={k} tau={tau} n<={n_max}", bad is None, bad or "")
            )
            if bi_max < 0:
                continue
            refined = series.stack_series(k, tau, bi_max, table.matchings)
            bad = None
            for n in range(bi_max + 1):
                if refined.u_degree(n) > n // 2:
                    bad = f"n={n}: u-degree {refined.u_degree(n)} > n/2"
                    break
                for t in range(n // 2 + 1):
                    coeff = refined.coefficient_ut(n, t)
                    if coeff.denominator != 1 or coeff < 0:
                        bad = f"n={n} t={t}: coefficient {coeff} not a count"
                        break
                    if coeff != table.structures(k, tau, n, t):
                        bad = f"n={n} t={t}: series {coeff} != chain"
                        break
                if bad:
                    break
            if bad is None and refined.at_u1() != series.structure_series(
                k, tau, bi_max, table.matchings
            ):
                bad = "u=1 specialization differs from the univariate series"
            report.checks.append(
                Check(f"bivariate k={k} tau={tau} n<={bi_max}", bad is None, bad or "")
            )
    return report


def verify_identities(
    k_values, tau_values, order: int, table: CountTable | None = None
) -> SuiteReport:
    """The three substitution identities, coefficientwise to the order."""
    table = table or CountTable()
    report = SuiteReport("identities")
    for k in k_values:
        for tau in tau_values:
            result = series.identity_checks(k, tau, order, table)
            for check in result.checks:
                detail = "" if check.holds else f"first mismatch at {check.first_mismatch}"
                report.checks.append(
                    Check(f"{check.name} k={k} tau={tau} order={order}", check.holds, detail)
                )
    return report


def verify_normal(
    k: int,
    tau: int,
    n_values,
    table: CountTable | None = None,
    mean_gap_factor: float = 0.1,
    var_gap_factor: float = 0.15,
) -> SuiteReport:
    """Normal convergence: TV distance shrinks and moment gaps close."""
    table = table or CountTable()
    report = SuiteReport("normal")
    params = asymptotics.clt_params(k, tau)
    n_values = sorted(n_values)
    comparisons = [
        asymptotics.normal_compare(table.distribution(k, tau, n), params)
        for n in n_values
    ]
    tvs = [c.tv_distance for c in comparisons]
    monotone = all(a > b for a, b in zip(tvs, tvs[1:]))
    detail = ", ".join(f"n={c.n}: tv={c.tv_distance:.5f}" for c in comparisons)
    report.checks.append(
        Check(f"tv decreasing k={k} tau={tau} over n={n_values}", monotone, detail)
    )
    last = comparisons[-1]
    mean_limit = mean_gap_factor * params.mu
    var_limit = var_gap_factor * params.sigma2
    report.checks.append(
        Check(
            f"mean gap at n={last.n}",
            last.mean_gap <= mean_limit,
            f"{last.mean_gap:.6f} vs limit {mean_limit:.6f}",
        )
    )
    report.checks.append(
        Check(
            f"variance gap at n={last.n}",
            last.var_gap <= var_limit,
            f"{last.var_gap:.7f} vs limit {var_limit:.7f}",
        )
    )
    return report
