"""Command-line front end.

Commands: count, dist, clt, table1, series-dump, fig1,
verify {oracle|series|identities|normal}, cache {info|clear}.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 internal
fault.  Data outputs are deterministic (no timestamps); when --out is given,
run metadata goes to a separate <out>.meta.json sidecar.  Configuration
precedence is flags > environment (STACKDIST_CACHE) > defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

from stackdist import __version__, asymptotics, cache, verify
from stackdist.errors import ConsistencyError, InvalidParameterError, SolverError
from stackdist.exact import CountTable
from stackdist.matchings import MatchingTable


@dataclass
class RunConfig:
    """Validated knobs shared by the data-producing commands."""

    command: str
    cache_dir: str | None
    fmt: str
    out: str | None
    fig: str | None
    tol: float
    bf_cap: int
    lambda_min: int


def parse_int_values(text: str) -> list[int]:
    """Parse "7", "2,3" or "2..4" (and mixtures) into a list of ints."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise InvalidParameterError(f"empty integer list: {text!r}")
    return list(dict.fromkeys(out))


def single_value(values: list[int], flag: str) -> int:
    if len(values) != 1:
        raise InvalidParameterError(f"{flag} takes a single value here, got {values}")
    return values[0]


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    cache_dir = getattr(args, "cache_dir", None) or os.environ.get("STACKDIST_CACHE")
    return RunConfig(
        command=args.command,
        cache_dir=cache_dir,
        fmt=getattr(args, "format", "csv"),
        out=getattr(args, "out", None),
        fig=getattr(args, "fig", None),
        tol=getattr(args, "tol", 1e-13),
        bf_cap=getattr(args, "bf_cap", 14),
        lambda_min=getattr(args, "lambda_min", 4),
    )


def _count_table(cfg: RunConfig) -> CountTable:
    return CountTable(MatchingTable(cache_dir=cfg.cache_dir))


def _emit(text: str, cfg: RunConfig, argv: list[str]):
    if cfg.out is None:
        sys.stdout.write(text)
        return
    path = Path(cfg.out)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as handle:
        handle.write(text)
    meta = {
        "command": cfg.command,
        "argv": argv,
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
    }
    with open(str(path) + ".meta.json", "w", newline="\n") as handle:
        json.dump(meta, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _csv(header: str, rows) -> str:
    return "\n".join([header] + [",".join(str(c) for c in row) for row in rows]) + "\n"


# -- data commands ---------------------------------------------------------


def cmd_count(args, argv) -> int:
    cfg = _resolve_config(args)
    k = single_value(parse_int_values(args.k), "--k")
    tau = single_value(parse_int_values(args.tau), "--tau")
    table = _count_table(cfg)
    rows = []
    for n in parse_int_values(args.n):
        if args.t is not None:
            ts = [args.t]
        else:
            counts = [table.structures(k, tau, n, t) for t in range(n // 2 + 1)]
            last = max((t for t, c in enumerate(counts) if c), default=0)
            ts = list(range(last + 1))
        for t in ts:
            rows.append((n, t, table.structures(k, tau, n, t)))
    if cfg.fmt == "json":
        payload = {
            "k": k,
            "tau": tau,
            "rows": [{"n": n, "t": t, "count": str(c)} for n, t, c in rows],
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", cfg, argv)
    else:
        _emit(_csv("n,t,count", rows), cfg, argv)
    return 0


def cmd_dist(args, argv) -> int:
    cfg = _resolve_config(args)
    k = single_value(parse_int_values(args.k), "--k")
    tau = single_value(parse_int_values(args.tau), "--tau")
    n = single_value(parse_int_values(args.n), "--n")
    table = _count_table(cfg)
    dist = table.distribution(k, tau, n)
    last = max((t for t, p in enumerate(dist.probabilities) if p), default=0)
    rows = [
        (t, dist.probabilities[t].numerator, dist.probabilities[t].denominator,
         repr(float(dist.probabilities[t])))
        for t in range(last + 1)
    ]
    if cfg.fmt == "json":
        payload = {
            "k": k,
            "tau": tau,
            "n": n,
            "total": str(dist.total),
            "rows": [
                {"t": t, "num": str(num), "den": str(den), "float": float(flt)}
                for t, num, den, flt in rows
            ],
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", cfg, argv)
    else:
        _emit(_csv("t,probability_num,probability_den,float", rows), cfg, argv)
    if cfg.fig:
        from stackdist import figures

        params = None
        try:
            params = asymptotics.clt_params(k, tau, tol=cfg.tol)
        except (SolverError, InvalidParameterError):
            pass
        figures.distribution_figure(dist, params, cfg.fig)
    return 0


def cmd_clt(args, argv) -> int:
    cfg = _resolve_config(args)
    k = single_value(parse_int_values(args.k), "--k")
    tau = single_value(parse_int_values(args.tau), "--tau")
    result = asymptotics.clt_params(k, tau, tol=cfg.tol)
    _emit(json.dumps(asdict(result), indent=2, sort_keys=True) + "\n", cfg, argv)
    return 0


def cmd_table1(args, argv) -> int:
    cfg = _resolve_config(args)
    cells = asymptotics.clt_grid(
        parse_int_values(args.k), parse_int_values(args.tau), tol=cfg.tol
    )
    rows = []
    for cell in cells:
        r = cell.result
        rows.append(
            (
                r.k,
                r.tau,
                repr(r.mu),
                repr(r.sigma2),
                "" if cell.mu_ref is None else repr(cell.mu_ref),
                "" if cell.sigma2_ref is None else repr(cell.sigma2_ref),
                "" if cell.mu_dev is None else f"{cell.mu_dev:.3e}",
                "" if cell.sigma2_dev is None else f"{cell.sigma2_dev:.3e}",
                int(cell.anomalous),
            )
        )
    _emit(
        _csv("k,tau,mu,sigma2,mu_ref,sigma2_ref,mu_dev,sigma2_dev,anomalous", rows),
        cfg,
        argv,
    )
    anomalies = [c for c in cells if c.anomalous]
    if anomalies:
        names = ", ".join(f"(k={c.result.k}, tau={c.result.tau})" for c in anomalies)
        print(
            f"note: computed values take precedence over the reference entries "
            f"at {names}; see README on reference-table anomalies",
            file=sys.stderr,
        )
    if cfg.fig:
        from stackdist import figures

        figures.grid_figure(cells, cfg.fig)
    return 0


def cmd_series_dump(args, argv) -> int:
    cfg = _resolve_config(args)
    from stackdist import series

    k = single_value(parse_int_values(args.k), "--k")
    tau = single_value(parse_int_values(args.tau), "--tau")
    order = args.n_max
    table = MatchingTable(cache_dir=cfg.cache_dir)
    if args.bivariate:
        refined = series.stack_series(k, tau, order, table)
        rows = []
        for n in range(order + 1):
            top = max(refined.u_degree(n), 0)
            for t in range(top + 1):
                coeff = refined.coefficient_ut(n, t)
                rows.append((n, t, coeff.numerator if coeff.denominator == 1 else coeff))
        _emit(_csv("n,t,coefficient", rows), cfg, argv)
    else:
        uni = series.structure_series(k, tau, order, table)
        rows = [
            (n, uni.coefficient(n).numerator if uni.coefficient(n).denominator == 1
             else uni.coefficient(n))
            for n in range(order + 1)
        ]
        _emit(_csv("n,coefficient", rows), cfg, argv)
    return 0


def cmd_fig1(args, argv) -> int:
    cfg = _resolve_config(args)
    k = single_value(parse_int_values(args.k), "--k")
    tau = single_value(parse_int_values(args.tau), "--tau")
    n = single_value(parse_int_values(args.n), "--n")
    table = _count_table(cfg)
    dist = table.distribution(k, tau, n)
    params = asymptotics.clt_params(k, tau, tol=cfg.tol)
    last = max((t for t, p in enumerate(dist.probabilities) if p), default=0)
    t_max = min(n // 2, last + 3)
    normal_mass = asymptotics.discretized_normal(n, params.mu, params.sigma2, t_max)
    rows = [
        (t, repr(float(dist.probabilities[t])), repr(normal_mass[t]))
        for t in range(t_max + 1)
    ]
    _emit(_csv("t,exact_pmf,normal_pmf", rows), cfg, argv)
    if cfg.fig:
        from stackdist import figures

        figures.distribution_figure(dist, params, cfg.fig)
    return 0


# -- verification and cache ------------------------------------------------


def cmd_verify(args, argv) -> int:
    cfg = _resolve_config(args)
    table = _count_table(cfg)
    suite = args.suite
    if suite == "oracle":
        report = verify.verify_oracle(
            parse_int_values(args.k),
            parse_int_values(args.tau),
            n_max=args.n_max,
            lambda_min=cfg.lambda_min,
            cap=cfg.bf_cap,
            table=table,
        )
        calibration = verify.calibrate_arc_length(
            parse_int_values(args.k),
            parse_int_values(args.tau),
            n_range=range(9, min(args.n_max, 12) + 1),
            cap=cfg.bf_cap,
            table=table,
        )
        print(
            "calibration: formulas realize minimum arc length "
            f"{calibration['realized']} (j-i >= {calibration['realized']}); "
            f"match under 4: {calibration[4]}, under 5: {calibration[5]}"
        )
    elif suite == "series":
        report = verify.verify_series(
            parse_int_values(args.k),
            parse_int_values(args.tau),
            n_max=args.n_max,
            bivariate_n_max=min(args.n_max, args.bivariate_n_max),
            table=table,
        )
    elif suite == "identities":
        report = verify.verify_identities(
            parse_int_values(args.k),
            parse_int_values(args.tau),
            order=args.n_max,
            table=table,
        )
    else:
        report = verify.verify_normal(
            single_value(parse_int_values(args.k), "--k"),
            single_value(parse_int_values(args.tau), "--tau"),
            parse_int_values(args.n),
            table=table,
        )
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def cmd_cache(args, argv) -> int:
    cfg = _resolve_config(args)
    if cfg.cache_dir is None:
        raise InvalidParameterError(
            "no cache directory configured (use --cache-dir or STACKDIST_CACHE)"
        )
    if args.action == "info":
        entries = cache.cache_info(cfg.cache_dir)
        if not entries:
            print(f"cache {cfg.cache_dir}: empty")
        for entry in entries:
            print(
                f"{entry['path']}: k={entry['k']} max_pairs={entry['max_pairs']} "
                f"({entry['bytes']} bytes)"
            )
    else:
        removed = cache.cache_clear(cfg.cache_dir)
        print(f"cache {cfg.cache_dir}: removed {removed} file(s)")
    return 0


# -- parser ------------------------------------------------------------------


def _add_common(sub, *, fmt=False, out=False, fig=False, tol=False):
    sub.add_argument("--cache-dir", help="directory for matching-table caches")
    if fmt:
        sub.add_argument("--format", choices=("csv", "json"), default="csv")
    if out:
        sub.add_argument("--out", help="write output here (plus <out>.meta.json)")
    if fig:
        sub.add_argument("--fig", help="also render a figure to this path")
    if tol:
        sub.add_argument("--tol", type=float, default=1e-13, help="solver residual bound")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stackdist",
        description="Stack-number statistics of k-noncrossing canonical structures",
    )
    parser.add_argument("--version", action="version", version=f"stackdist {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("count", help="exact structure counts by stack number")
    p.add_argument("--k", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--n", required=True, help="size or range, e.g. 9 or 5..12")
    p.add_argument("--t", type=int, help="single stack number (default: full row)")
    _add_common(p, fmt=True, out=True)
    p.set_defaults(func=cmd_count)

    p = subs.add_parser("dist", help="exact stack-number distribution at one size")
    p.add_argument("--k", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--n", required=True)
    _add_common(p, fmt=True, out=True, fig=True, tol=True)
    p.set_defaults(func=cmd_dist)

    p = subs.add_parser("clt", help="limit-law parameters from the singularity curve")
    p.add_argument("--k", required=True)
    p.add_argument("--tau", required=True)
    _add_common(p, out=True, tol=True)
    p.set_defaults(func=cmd_clt)

    p = subs.add_parser("table1", help="parameter grid with reference comparison")
    p.add_argument("--k", default="2..7")
    p.add_argument("--tau", default="3..7")
    _add_common(p, out=True, fig=True, tol=True)
    p.set_defaults(func=cmd_table1)

    p = subs.add_parser("series-dump", help="series coefficients (totals or per-t)")
    p.add_argument("--k", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--n-max", type=int, required=True, dest="n_max")
    p.add_argument("--bivariate", action="store_true", help="per-(n,t) coefficients")
    _add_common(p, out=True)
    p.set_defaults(func=cmd_series_dump)

    p = subs.add_parser("fig1", help="exact law vs normal limit as CSV (and figure)")
    p.add_argument("--k", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--n", required=True)
    _add_common(p, out=True, fig=True, tol=True)
    p.set_defaults(func=cmd_fig1)

    p = subs.add_parser("verify", help="cross-validation suites")
    p.add_argument("suite", choices=("oracle", "series", "identities", "normal"))
    p.add_argument("--k", default="2,3")
    p.add_argument("--tau", default="3,4")
    p.add_argument("--n", default="50,100,150", help="sizes for the normal suite")
    p.add_argument("--n-max", type=int, default=10, dest="n_max")
    p.add_argument(
        "--bivariate-n-max", type=int, default=40, dest="bivariate_n_max",
        help="per-(n,t) comparison order for the series suite",
    )
    p.add_argument("--lambda-min", type=int, default=4, dest="lambda_min",
                   help="arc-length convention for the brute-force side")
    p.add_argument("--bf-cap", type=int, default=14, dest="bf_cap")
    _add_common(p, tol=True)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("cache", help="inspect or drop the on-disk tables")
    p.add_argument("action", choices=("info", "clear"))
    _add_common(p)
    p.set_defaults(func=cmd_cache)

    return parser


def main(argv: list[str] | None = None) -> int:
    args_list = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(args_list)
    try:
        return args.func(args, args_list)
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConsistencyError, SolverError) as exc:
        print(f"internal fault: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
