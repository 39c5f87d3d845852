"""CSV emission and the figures rendered alongside each report.

CSV files are UTF-8, comma-delimited, header row always present, floats
printed with 12 significant digits.  Output is a pure function of the rows,
so reruns produce byte-identical files.  Figures are rendered with the Agg
backend next to the delimited output (same stem, ``.png``).
"""

from __future__ import annotations

import csv
import io
import sys
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "format_cell",
    "write_csv",
    "figure_path_for",
    "save_objective_curve",
    "save_sweep_curve",
    "save_battery_summary",
    "save_sample_histogram",
]

_RC = {
    "figure.figsize": (6.0, 3.6),
    "figure.dpi": 130,
    "savefig.bbox": "tight",
    "axes.grid": True,
    "grid.alpha": 0.35,
}


def format_cell(value) -> str:
    """Render one CSV cell: floats to 12 significant digits, bools lowercase."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    return str(value)


def write_csv(path: str | None, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write a CSV document to ``path``, or to stdout when path is None."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([format_cell(cell) for cell in row])
    text = buffer.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        target = Path(path)
        if target.parent != Path(""):
            target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")


def figure_path_for(csv_path: str) -> str:
    return str(Path(csv_path).with_suffix(".png"))


def _save(fig, path: str) -> None:
    fig.savefig(path, format="png")
    plt.close(fig)


def save_objective_curve(
    thetas: Sequence[float],
    eus: Sequence[float],
    theta_star: float,
    eu_star: float,
    path: str,
) -> None:
    """Expected utility against the liability level, optimum marked."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(thetas, eus, lw=1.5)
        ax.plot([theta_star], [eu_star], "o", ms=6, color="crimson")
        ax.annotate(
            f"theta* = {theta_star:.6g}",
            (theta_star, eu_star),
            textcoords="offset points",
            xytext=(8, -12),
            fontsize=9,
        )
        ax.set_xlabel("liability level theta")
        ax.set_ylabel("expected utility")
        _save(fig, path)


def save_sweep_curve(
    xs: Sequence[float],
    thetas: Sequence[float],
    x_label: str,
    path: str,
    log_x: bool = False,
) -> None:
    """Optimal liability level along a sweep grid."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(xs, thetas, marker="o", ms=3.5, lw=1.2)
        if log_x:
            ax.set_xscale("log")
        ax.set_xlabel(x_label)
        ax.set_ylabel("optimal liability theta*")
        ax.set_ylim(-0.05, 1.05)
        _save(fig, path)


def save_battery_summary(reports, path: str) -> None:
    """Stacked verdict counts per theorem for a battery run."""
    order = ["T1", "T2", "T3", "T4", "P1", "T5"]
    kinds = ["consistent", "premise_not_met", "violation"]
    colors = {"consistent": "#2a9d4e", "premise_not_met": "#b0b0b0", "violation": "#d62828"}
    counts = {tid: {k: 0 for k in kinds} for tid in order}
    for report in reports:
        tid = str(report.theorem_id.value)
        verdict = str(report.verdict.value)
        if tid in counts and verdict in counts[tid]:
            counts[tid][verdict] += 1
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        bottom = np.zeros(len(order))
        for kind in kinds:
            values = np.array([counts[tid][kind] for tid in order], dtype=float)
            ax.bar(order, values, bottom=bottom, label=kind, color=colors[kind])
            bottom += values
        ax.set_ylabel("reports")
        ax.legend(fontsize=8)
        _save(fig, path)


def save_sample_histogram(wealth: Sequence[float], path: str) -> None:
    """Distribution of realized final wealth over the sampled draws."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.hist(np.asarray(wealth, dtype=float), bins=60, color="#33658a")
        ax.set_xlabel("final wealth")
        ax.set_ylabel("draws")
        _save(fig, path)
