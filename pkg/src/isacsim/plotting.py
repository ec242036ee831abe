"""Figure rendering for the CLI report paths.

Every function takes already-computed rows (the same data written to CSV)
and saves a PNG next to the delimited output.  Headless-safe: the Agg
backend is forced before pyplot is imported.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["plot_roc", "plot_tradeoff", "plot_allocation", "plot_validation"]

_FIGSIZE = (7.2, 4.6)


def plot_roc(rows: list[dict], out_path: str, title: str) -> None:
    """PFA/PD vs threshold, one curve pair per transmit power."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    powers = sorted({r["power_dbm"] for r in rows})
    for p in powers:
        sel = [r for r in rows if r["power_dbm"] == p]
        kappa = [r["kappa"] for r in sel]
        ax.plot(kappa, [r["pfa_theory"] for r in sel], "--", label=f"PFA, P={p:g} dBm")
        ax.plot(kappa, [r["pd_theory"] for r in sel], "-", label=f"PD, P={p:g} dBm")
    ax.set_xlabel(r"threshold $\kappa$")
    ax.set_ylabel("probability")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(title)
    ax.grid(True, linestyle=":", linewidth=0.6)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_tradeoff(rows: list[dict], out_path: str, title: str) -> None:
    """Detection probability against achievable rate along the split sweep."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    kept = [r for r in rows if not r["skipped"]]
    ax.plot([r["rate"] for r in kept], [r["pd"] for r in kept], "o-", ms=3)
    ax.set_xlabel("achievable rate (b/s/Hz)")
    ax.set_ylabel("detection probability")
    ax.set_title(title)
    ax.grid(True, linestyle=":", linewidth=0.6)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_allocation(rows: list[dict], out_path: str, title: str) -> None:
    """Bar chart of minimum power per case, with reference values overlaid."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    cases = [r["case"] for r in rows]
    x = np.arange(len(cases))
    ax.bar(x, [r["p_min_dbm"] for r in rows], width=0.6, label="solved")
    refs = [(i, r["p_min_ref_dbm"]) for i, r in enumerate(rows)
            if r["p_min_ref_dbm"] is not None]
    if refs:
        ax.plot([i for i, _ in refs], [v for _, v in refs], "k_", ms=18,
                label="reference")
    ax.set_xticks(x, cases)
    ax.set_xlabel("case")
    ax.set_ylabel("minimum transmit power (dBm)")
    ax.set_title(title)
    ax.grid(True, axis="y", linestyle=":", linewidth=0.6)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_validation(report, out_path: str, title: str) -> None:
    """Overlay of closed-form curves and empirical points with error bars."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    k = report.kappa_grid
    ax.plot(k, report.pfa_theory, "--", color="C0", label="PFA closed form")
    ax.plot(k, report.pd_theory, "-", color="C1", label="PD closed form")
    ax.errorbar(k, report.pfa_hat, yerr=3 * report.pfa_se, fmt=".", color="C0",
                ms=4, label="PFA simulated (3 SE)")
    ax.errorbar(k, report.pd_hat, yerr=3 * report.pd_se, fmt=".", color="C1",
                ms=4, label="PD simulated (3 SE)")
    ax.set_xlabel(r"threshold $\kappa$")
    ax.set_ylabel("probability")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(title)
    ax.grid(True, linestyle=":", linewidth=0.6)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
