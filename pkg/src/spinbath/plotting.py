"""Figure rendering for the CLI report path.

Each analysis gets a small matplotlib figure written next to the delimited
output.  Figures are a convenience view of the CSV contents, never a data
product: all quantitative output stays in the CSV/JSON files.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render"]


def _column(rows: list[tuple], columns: list[str], name: str) -> np.ndarray:
    idx = columns.index(name)
    return np.array([row[idx] for row in rows], dtype=float)


def _plot_decoherence(ax_list, columns, rows) -> None:
    ax, = ax_list
    t = _column(rows, columns, "t")
    ax.plot(t, _column(rows, columns, "abs_gamma"), label="|Gamma|", lw=1.5)
    ax.plot(t, _column(rows, columns, "re_gamma"), label="Re Gamma", lw=0.8)
    ax.plot(t, _column(rows, columns, "im_gamma"), label="Im Gamma", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("decoherence function")
    ax.legend(frameon=False, fontsize=8)


def _plot_lee_yang(ax_list, columns, rows) -> None:
    ax, = ax_list
    theta = np.linspace(0.0, 2.0 * math.pi, 400)
    ax.plot(np.cos(theta), np.sin(theta), color="0.8", lw=0.8)
    ax.plot(_column(rows, columns, "re_z"), _column(rows, columns, "im_z"),
            "o", ms=5, mfc="none")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_aspect("equal")


def _plot_trace_distance(ax_list, columns, rows) -> None:
    ax, = ax_list
    t = _column(rows, columns, "t")
    ax.plot(t, _column(rows, columns, "trace_distance"), lw=1.2, label="D(t)")
    ax.plot(t, _column(rows, columns, "sigma"), lw=0.8, label="sigma(t)")
    ax.axhline(0.0, color="0.85", lw=0.6)
    ax.set_xlabel("t")
    ax.legend(frameon=False, fontsize=8)


def _plot_cpf(ax_list, columns, rows) -> None:
    ax, = ax_list
    t = _column(rows, columns, "t")
    s = _column(rows, columns, "s")
    c = _column(rows, columns, "cpf_formula")
    t_vals = np.unique(t)
    s_vals = np.unique(s)
    if t_vals.size > 1 and s_vals.size > 1:
        grid = c.reshape(t_vals.size, s_vals.size)
        vmax = max(float(np.max(np.abs(grid))), 1e-12)
        im = ax.pcolormesh(s_vals, t_vals, grid, cmap="RdBu_r", vmin=-vmax, vmax=vmax)
        ax.figure.colorbar(im, ax=ax, label="C_pf")
        ax.set_xlabel("s")
        ax.set_ylabel("t")
    else:
        x = t if t_vals.size > 1 else s
        ax.plot(x, c, lw=1.2)
        ax.set_xlabel("t" if t_vals.size > 1 else "s")
        ax.set_ylabel("C_pf")


def _plot_pip(ax_list, columns, rows) -> None:
    ax, = ax_list
    f = _column(rows, columns, "fraction")
    mi = _column(rows, columns, "mutual_info_bits")
    ref = _column(rows, columns, "system_entropy_bits")
    if "beta" in columns:
        betas = _column(rows, columns, "beta")
        for beta in np.unique(betas):
            pick = betas == beta
            ax.plot(f[pick], mi[pick], marker=".", lw=1.0, label=f"beta={beta:g}")
        ax.legend(frameon=False, fontsize=8)
    else:
        ax.plot(f, mi, marker=".", lw=1.0)
    ax.axhline(ref[-1], color="0.7", lw=0.8, ls="--")
    ax.set_xlabel("fragment fraction f")
    ax.set_ylabel("I(S:F) [bits]")


def _plot_sbs(ax_list, columns, rows) -> None:
    ax, = ax_list
    t = _column(rows, columns, "t")
    ax.semilogy(t, np.maximum(_column(rows, columns, "coherence_trace_norm"), 1e-300),
                lw=1.2, label="coherence trace norm")
    ax.plot(t, _column(rows, columns, "conditional_fidelity"), lw=1.2,
            label="conditional fidelity")
    ax.set_xlabel("t")
    ax.legend(frameon=False, fontsize=8)


def _plot_purity(ax_list, columns, rows) -> None:
    ax, = ax_list
    ax.plot(_column(rows, columns, "beta"), _column(rows, columns, "purity"), lw=1.2)
    ax.set_xlabel("beta")
    ax.set_ylabel("bath purity")


def _plot_sweep(ax_list, columns, rows) -> None:
    ax, = ax_list
    if "t" not in columns:
        ax.text(0.5, 0.5, "no t axis to plot against", ha="center", va="center")
        return
    value_col = next(
        name for name in ("trace_distance", "cpf_formula", "abs_gamma", "purity")
        if name in columns)
    t = _column(rows, columns, "t")
    label_cols = [name for name in columns
                  if name not in ("t", "s") and columns.index(name) < columns.index(value_col)
                  and name != value_col]
    labels = [tuple(row[columns.index(name)] for name in label_cols) for row in rows]
    values = _column(rows, columns, value_col)
    seen: dict[tuple, list[int]] = {}
    for i, lab in enumerate(labels):
        seen.setdefault(lab, []).append(i)
    for lab, idx in list(seen.items())[:12]:
        tag = ", ".join(f"{name}={val:g}" for name, val in zip(label_cols, lab))
        order = np.argsort(t[idx])
        ax.plot(t[idx][order], values[idx][order], lw=1.0, label=tag or None)
    if label_cols:
        ax.legend(frameon=False, fontsize=7)
    ax.set_xlabel("t")
    ax.set_ylabel(value_col)


_RENDERERS = {
    "decoherence": _plot_decoherence,
    "lee-yang": _plot_lee_yang,
    "trace-distance": _plot_trace_distance,
    "cpf": _plot_cpf,
    "pip": _plot_pip,
    "sbs": _plot_sbs,
    "purity": _plot_purity,
    "sweep": _plot_sweep,
}


def render(subcommand: str, columns: list[str], rows: list[tuple], png_path: str) -> None:
    """Render the figure for one analysis to ``png_path``."""
    fig, ax = plt.subplots(figsize=(5.0, 3.4), dpi=150)
    try:
        _RENDERERS[subcommand]([ax], columns, rows)
        fig.suptitle(subcommand, fontsize=10)
        fig.tight_layout()
        fig.savefig(png_path)
    finally:
        plt.close(fig)
