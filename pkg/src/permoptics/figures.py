"""Matplotlib renderings for the reproduction reports.

Every renderer takes the already-computed rows and writes a PNG next to the
CSV; the delimited files remain the data contract and the figures are a
convenience view of the same numbers.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _finish(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_benchmark_comparison(rows: list[dict], path) -> Path:
    """Exact vs simulated vs no-interference values per instance, log scale."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    x = np.arange(len(rows))
    width = 0.27
    exact = [r["exact_computed"] for r in rows]
    simulated = [r["simulated_estimate"] for r in rows]
    sim_err = [r["simulated_stderr"] for r in rows]
    no_int = [r["no_interference_computed"] for r in rows]
    ax.bar(x - width, exact, width, label="exact permanent")
    ax.bar(x, simulated, width, yerr=sim_err, capsize=3, label="sampled estimate")
    ax.bar(x + width, no_int, width, label="no interference")
    ax.set_yscale("log")
    ax.set_xticks(x, [r["instance"] for r in rows], rotation=15)
    ax.set_ylabel("permanent value")
    ax.set_title("Reference instances: exact vs sampled vs distinguishable")
    ax.legend()
    return _finish(fig, path)


def render_error_scaling(rows: list[dict], path) -> Path:
    """Empirical error quantiles against the predicted 1/sqrt(N) margins."""
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    deltas = sorted({r["delta"] for r in rows})
    for delta in deltas:
        sel = sorted((r for r in rows if r["delta"] == delta), key=lambda r: r["n"])
        ns = [r["n"] for r in sel]
        ax.loglog(ns, [r["eps_theory"] for r in sel], "-", label=f"predicted, delta={delta}")
        ax.loglog(ns, [r["eps_empirical"] for r in sel], "o", label=f"empirical, delta={delta}")
    ax.set_xlabel("number of samples N")
    ax.set_ylabel("relative error quantile")
    ax.set_title("Margin of error vs sample count")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    return _finish(fig, path)


def render_visibility(rows: list[dict], path) -> Path:
    """Two-endpoint dip: distinguishable level vs interfering level."""
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    row = rows[0]
    levels = [row["no_interference_rate"], row["interfering_rate"]]
    ax.bar(["distinguishable", "interfering"], levels)
    ax.set_ylabel("leading-order coincidence rate")
    ax.set_title(f"Thermal dip, visibility = {row['visibility']:.4f}")
    ax.axhline(levels[0], linestyle=":", color="gray", linewidth=1)
    return _finish(fig, path)


def render_haar_average(rows: list[dict], path) -> Path:
    """Closed-form Haar mean vs asymptote, with Monte Carlo points."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    dims = [r["dim"] for r in rows]
    ax.semilogy(dims, [r["exact"] for r in rows], "-o", label="closed form")
    ax.semilogy(dims, [r["asymptote"] for r in rows], "--", label="asymptote")
    mc = [(r["dim"], r["mc_mean"], r["mc_stderr"]) for r in rows if r["mc_mean"] > 0]
    if mc:
        ax.errorbar(
            [m[0] for m in mc],
            [m[1] for m in mc],
            yerr=[3 * m[2] for m in mc],
            fmt="s",
            capsize=3,
            label="Monte Carlo (3 sigma)",
        )
    ax.set_xlabel("dimension M")
    ax.set_ylabel("mean |Perm U|^2 over Haar draws")
    ax.set_title("Haar-averaged squared permanent")
    ax.legend()
    return _finish(fig, path)


def render_bounds(rows: list[dict], path) -> Path:
    """Maximum click probability against e^{-M}, plus observed search maxima."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    dims = [r["dim"] for r in rows]
    ax.semilogy(dims, [r["max_click_probability"] for r in rows], "-o", label="attainable maximum")
    ax.semilogy(dims, [r["exp_bound"] for r in rows], "--", label="e^-M envelope")
    searched = [(r["dim"], r["search_max"]) for r in rows if r["search_max"] > 0]
    if searched:
        ax.semilogy(
            [s[0] for s in searched],
            [s[1] for s in searched],
            "s",
            label="randomized search max",
        )
    ax.set_xlabel("dimension M")
    ax.set_ylabel("all-click probability")
    ax.set_title("Click probability bound")
    ax.legend()
    return _finish(fig, path)
