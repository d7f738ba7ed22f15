"""Figure rendering for the reporting commands. Figures are written next to
the delimited output files; all paths are returned so callers can list them."""

from __future__ import annotations

import math
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def bench_figures(rows: list[dict], out_base: str) -> list[str]:
    """List-size growth and outcome rates from bench rows.

    Returns the written file paths ({out_base}_list_sizes.png and
    {out_base}_outcomes.png).
    """
    paths = []
    by_algo_c: dict[tuple[str, str], list[dict]] = {}
    for row in rows:
        by_algo_c.setdefault((row["algo"], row["C"]), []).append(row)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (algo, cset), group in sorted(by_algo_c.items()):
        pts: dict[int, list[int]] = {}
        for row in group:
            size = row.get("list_size")
            if size:
                pts.setdefault(row["n"], []).append(size)
        if not pts:
            continue
        ns = sorted(pts)
        med = [float(np.median(pts[n])) for n in ns]
        ax.plot(ns, med, marker="o", label=f"{algo} {cset}")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("median list size")
    ax.legend(fontsize=8)
    ax.set_title("Enumerated list sizes")
    fig.tight_layout()
    path = f"{out_base}_list_sizes.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    labels, rates = [], []
    for (algo, cset), group in sorted(by_algo_c.items()):
        labels.append(f"{algo}\n{cset}")
        solved = sum(1 for r in group if r["outcome"] == "solved")
        rates.append(solved / len(group))
    ax.bar(range(len(labels)), rates, color="tab:blue")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("solved fraction")
    ax.set_title("Outcomes by solver and coefficient set")
    fig.tight_layout()
    path = f"{out_base}_outcomes.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)
    return paths


def analyze_figure(target: str, data, path: str) -> Optional[str]:
    """Landscape / comparison figure for one analyze target."""
    from . import analysis

    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    if target == "pm2":
        step = 2e-3
        a0 = np.arange(0, 0.5 + step, step)
        a1 = np.arange(0, 0.35 + step, step)
        g0, g1 = np.meshgrid(a0, a1, indexing="ij")
        r = (1 - g0 - 2 * g1) / 2
        f1 = 0.5 * (analysis._plogp(g0) + 2 * analysis._plogp(g1)
                    + 2 * analysis._plogp(r))
        f2 = math.log2(3) * (1 - g0) - 2 * g1
        v = np.where(r >= 0, np.minimum(f1, f2), np.nan)
        im = ax.pcolormesh(a0, a1, v.T, shading="auto")
        fig.colorbar(im, ax=ax, label="min of branch exponents")
        ax.plot([data["alpha0"]], [data["alpha1"]], "r*", markersize=12)
        ax.set_xlabel("alpha0")
        ax.set_ylabel("alpha1")
        ax.set_title(f"[-2:2] trade-off, max-min = {data['value']:.4f}")
    elif target == "pm3":
        bs = np.arange(0, 0.5, 1e-3)
        q = (1 - 2 * bs) / 4
        f1 = 0.5 * (4 * analysis._plogp(q) + 2 * analysis._plogp(bs))
        f2 = math.log2(6) / 3 + 0.5 - 2 * bs / 3
        ax.plot(bs, f1, label="partition branch")
        ax.plot(bs, f2, label="shifted-representation branch")
        ax.axvline(data["beta"], color="red", linestyle=":")
        ax.set_xlabel("beta")
        ax.set_ylabel("exponent")
        ax.legend()
        ax.set_title(f"[+-3] trade-off, value = {data['value']:.5f}")
    elif target == "ess":
        ps = np.arange(0.01, 0.6, 2e-3)
        b = analysis._ess_branch_b(ps)
        eps_grid = np.arange(0, 1 / 12, 1e-4)
        a = [float(analysis._ess_branch_a(np.full_like(eps_grid, p),
                                          eps_grid).min()) for p in ps]
        ax.plot(ps, a, label="good-pair branch (best eps)")
        ax.plot(ps, b, label="baseline branch")
        ax.axvline(data["p"], color="red", linestyle=":")
        ax.set_xlabel("zero fraction p")
        ax.set_ylabel("exponent")
        ax.legend()
        ax.set_title(f"Equal Subset Sum trade-off, value = {data['value']:.6f}")
    elif target == "appendix-b":
        ds = [row["d"] for row in data]
        ax.bar([d - 0.17 for d in ds], [row["lhs_base"] for row in data],
               width=0.34, label="filtered-search base")
        ax.bar([d + 0.17 for d in ds], [row["rhs_base"] for row in data],
               width=0.34, label="Meet-in-the-Middle base")
        ax.set_xlabel("d")
        ax.set_ylabel("exponential base")
        ax.legend()
        ax.set_title("Balanced-case comparison on [-d:d]")
    elif target == "table1":
        labels = [f"[+-{row['d']}] v{row['variant']}" for row in data]
        xs = np.arange(len(labels))
        ax.bar(xs - 0.2, [row["ratio_base"] for row in data], width=0.4,
               label="list/pair ratio base")
        ax.bar(xs + 0.2, [row["mim_base"] for row in data], width=0.4,
               label="Meet-in-the-Middle base")
        ax.set_xticks(xs)
        ax.set_xticklabels(labels, rotation=45, fontsize=7)
        ax.legend()
        ax.set_title("Factor catalog ratio bases")
    else:
        plt.close(fig)
        return None
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
