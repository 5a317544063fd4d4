"""Figure rendering for the report paths.

matplotlib is imported lazily inside each function so the counting and
solver modules stay free of plotting dependencies; figures are only built
when a CLI run asks for them.
"""

from __future__ import annotations

from stackdist.asymptotics import GridCell, SingularityResult, discretized_normal
from stackdist.exact import StackDistribution


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def distribution_figure(
    dist: StackDistribution,
    params: SingularityResult | None,
    path: str,
) -> str:
    """Exact stack-number law as bars, limiting normal overlaid when given."""
    plt = _pyplot()
    support = [t for t, p in enumerate(dist.probabilities) if p]
    t_max = (max(support) if support else 0) + 3
    ts = list(range(t_max + 1))
    exact_pmf = [float(dist.probabilities[t]) if t < len(dist.probabilities) else 0.0 for t in ts]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.bar(ts, exact_pmf, width=0.85, color="#7aa6c2", label="exact")
    if params is not None:
        normal = discretized_normal(dist.n, params.mu, params.sigma2, t_max)
        ax.plot(ts, normal, "k.-", lw=1.0, ms=6, label="normal limit")
    ax.set_xlabel("stacks t")
    ax.set_ylabel("probability")
    ax.set_title(f"stack-number law, k={dist.k}, tau={dist.tau}, n={dist.n}")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def grid_figure(cells: list[GridCell], path: str) -> str:
    """Limit-law mean and variance against tau, one line per k."""
    plt = _pyplot()
    by_k: dict[int, list[GridCell]] = {}
    for cell in cells:
        if cell.error is None:
            by_k.setdefault(cell.result.k, []).append(cell)

    fig, (ax_mu, ax_s2) = plt.subplots(1, 2, figsize=(10, 4.2))
    for k, row in sorted(by_k.items()):
        row = sorted(row, key=lambda c: c.result.tau)
        taus = [c.result.tau for c in row]
        ax_mu.plot(taus, [c.result.mu for c in row], "o-", label=f"k={k}")
        ax_s2.plot(taus, [c.result.sigma2 for c in row], "o-", label=f"k={k}")
        ref_pts = [(c.result.tau, c.mu_ref, c.sigma2_ref) for c in row if c.anomalous]
        if ref_pts:
            ax_mu.scatter(
                [p[0] for p in ref_pts],
                [p[1] for p in ref_pts],
                marker="x",
                color="red",
                zorder=5,
            )
            ax_s2.scatter(
                [p[0] for p in ref_pts],
                [p[2] for p in ref_pts],
                marker="x",
                color="red",
                zorder=5,
            )
    ax_mu.set_xlabel("tau")
    ax_mu.set_ylabel("mean density")
    ax_s2.set_xlabel("tau")
    ax_s2.set_ylabel("variance density")
    ax_mu.legend(frameon=False, fontsize=8)
    fig.suptitle("limit-law parameters (red x: deviating reference entries)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
