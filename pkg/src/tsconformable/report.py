"""Figure rendering for CLI runs: PNG files alongside the delimited output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def save_table_figure(columns, rows, path, title=""):
    """Line plot of every value column against the first (grid) column."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    if rows:
        xs = [r[0] for r in rows]
        for j, name in enumerate(columns[1:], start=1):
            ax.plot(xs, [r[j] for r in rows], marker=".", lw=1.2, label=name)
        ax.legend(loc="best", fontsize=8)
    ax.set_xlabel(columns[0] if columns else "t")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_verify_figure(reports, path, title="identity suite deviations"):
    """Horizontal bars of max deviation per case, log-scaled, colored by outcome."""
    fig_h = max(3.0, 0.22 * len(reports) + 1.2)
    fig, ax = plt.subplots(figsize=(8.5, fig_h))
    labels = []
    values = []
    colors = []
    for r in reports:
        labels.append(f"{r.id} | {r.scale} | {r.kernel}")
        floor = 1e-17
        values.append(max(r.max_abs_dev, floor))
        if r.skipped:
            colors.append("0.7")
        elif r.passed:
            colors.append("tab:green")
        else:
            colors.append("tab:red")
    ypos = range(len(labels))
    ax.barh(ypos, values, color=colors)
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(labels, fontsize=6)
    ax.set_xscale("log")
    ax.set_xlabel("max abs deviation")
    ax.set_title(title)
    ax.invert_yaxis()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
