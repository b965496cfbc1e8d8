"""Matplotlib figure rendering for the report paths (PNG files next to the
delimited output)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def residual_history_plot(reports: dict, path) -> None:
    """Semilog residual histories; one labelled line per report."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, rep in reports.items():
        hist = rep.relative_residual_history
        ax.semilogy(np.arange(1, len(hist) + 1), hist, marker="o",
                    markersize=3, label=label)
    ax.set_xlabel("iteration")
    ax.set_ylabel("preconditioned relative residual")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def convergence_plot(result: dict, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    h = np.pi / np.asarray(result["meshes"], dtype=float)
    for name, errs in result["errors"].items():
        slope = result["slopes"].get(name.replace("errors", ""), None)
        label = name
        if name in result["slopes"]:
            label += f" (slope {result['slopes'][name]:.2f})"
        ax.loglog(h, errs, marker="o", label=label)
    ax.set_xlabel("h")
    ax.set_ylabel("error")
    ax.set_title(result["case"])
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def table_plot(rows: list, table_id: str, path) -> None:
    """Measured vs reference iteration bars for one table."""
    labels, measured, refs = [], [], []
    for row in rows:
        key, _, kind, meas, refv, _, note = row
        if note.startswith("skipped") or meas == "":
            continue
        labels.append(f"{key}/{kind}")
        measured.append(float(meas))
        refs.append(float(refv) if isinstance(refv, (int, float)) else np.nan)
    if not labels:
        return
    x = np.arange(len(labels))
    fig, ax = plt.subplots(figsize=(max(6, 0.65 * len(labels)), 4))
    ax.bar(x - 0.2, measured, width=0.4, label="measured")
    ax.bar(x + 0.2, refs, width=0.4, label="reference")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("GMRES iterations")
    ax.set_title(table_id)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def pade_sweep_plot(result: dict, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    items = sorted(result["counts"].items())
    ax.plot([i[0] for i in items], [i[1] for i in items], marker="o")
    ax.set_xlabel("number of Pade terms")
    ax.set_ylabel("GMRES iterations")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def field_plot(grid, path, show: str = "total") -> None:
    vals = getattr(grid, show)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4.2))
    extent = [grid.x[0], grid.x[-1], grid.y[0], grid.y[-1]]
    im0 = axes[0].imshow(np.real(vals).T, origin="lower", extent=extent,
                         cmap="RdBu_r")
    axes[0].set_title(f"Re {show} field")
    fig.colorbar(im0, ax=axes[0], shrink=0.85)
    im1 = axes[1].imshow(np.abs(vals).T, origin="lower", extent=extent,
                         cmap="viridis")
    axes[1].set_title(f"|{show} field|")
    fig.colorbar(im1, ax=axes[1], shrink=0.85)
    for ax in axes:
        ax.set_xlabel("x")
        ax.set_ylabel("y")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def robustness_plot(result: dict, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for kind, counts in result["counts"].items():
        ax.plot(result["kl_over_pi"], counts, marker="o", label=kind)
    ax.set_xlabel("k |Gamma| / pi")
    ax.set_ylabel("GMRES iterations")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
