"""Figure construction: lines for analytic series, markers for simulation.

Data is plotted exactly as read, in file order; nothing is sorted,
resampled, or recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .reader import FigureData, PlotDataError, load_figure_csv, validate_figure_data

_STYLE_KEYS = ("dpi", "title", "figsize")
_DEFAULT_DPI = 150
_DEFAULT_FIGSIZE = (7.0, 5.0)

_Y_LABEL = {
    "fig1": "activity probability",
    "fig2": "LOS probability of the n-th nearest transmitter",
    "fig3": "coverage probability",
}
_X_LABEL = {
    "fig1": "lambda_ap (per m^3)",
    "fig2": "lambda_active (per m^3)",
    "fig3": "lambda_ap (per m^3)",
}


@dataclass(frozen=True)
class PlotSpec:
    """One render request: which CSV, which figure kind, where to write."""

    csv_path: Path
    kind: str
    out_path: Path
    style: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "csv_path", Path(self.csv_path))
        object.__setattr__(self, "out_path", Path(self.out_path))
        unknown = [k for k in self.style if k not in _STYLE_KEYS]
        if unknown:
            raise PlotDataError(
                f"unknown style keys: {', '.join(sorted(unknown))}; known: {', '.join(_STYLE_KEYS)}"
            )


def _fmt(value: float) -> str:
    return format(value, "g")


def _groups(rows, key):
    # first-appearance order, so the figure reflects the file as written
    order = []
    bucket = {}
    for row in rows:
        value = row[key]
        if value not in bucket:
            bucket[value] = []
            order.append(value)
        bucket[value].append(row)
    return [(value, bucket[value]) for value in order]


def _line_and_markers(ax, rows, x_col, line_col, sim_col, ci_col, label_suffix, color):
    xs = [row[x_col] for row in rows]
    ax.plot(
        xs,
        [row[line_col] for row in rows],
        linestyle="-",
        marker="",
        color=color,
        label=f"{line_col}, {label_suffix}",
    )
    sim_rows = [row for row in rows if row[sim_col] is not None]
    if sim_rows:
        ax.errorbar(
            [row[x_col] for row in sim_rows],
            [row[sim_col] for row in sim_rows],
            yerr=[row[ci_col] or 0.0 for row in sim_rows],
            fmt="o",
            linestyle="none",
            markerfacecolor="none",
            color=color,
            label=f"{sim_col}, {label_suffix}",
        )


def _plot_fig1(ax, data: FigureData) -> None:
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for i, (lam_ue, rows) in enumerate(_groups(data.rows, "lambda_ue")):
        _line_and_markers(
            ax,
            rows,
            "lambda_ap",
            "q_analytic",
            "q_sim",
            "ci",
            f"lambda_ue={_fmt(lam_ue)}",
            colors[i % len(colors)],
        )


def _plot_fig2(ax, data: FigureData) -> None:
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for i, (order, rows) in enumerate(_groups(data.rows, "n")):
        _line_and_markers(
            ax,
            rows,
            "lambda_active",
            "p_analytic",
            "p_sim",
            "ci",
            f"n={_fmt(order)}",
            colors[i % len(colors)],
        )


def _plot_fig3(ax, data: FigureData) -> None:
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for i, (lam_ue, rows) in enumerate(_groups(data.rows, "lambda_ue")):
        color = colors[i % len(colors)]
        suffix = f"lambda_ue={_fmt(lam_ue)}"
        bounded = [row for row in rows if row["cov_lower"] is not None]
        ax.plot(
            [row["lambda_ap"] for row in bounded],
            [row["cov_upper"] for row in bounded],
            linestyle="-",
            marker="",
            color=color,
            label=f"cov_upper, {suffix}",
        )
        ax.plot(
            [row["lambda_ap"] for row in bounded],
            [row["cov_lower"] for row in bounded],
            linestyle="--",
            marker="",
            color=color,
            label=f"cov_lower, {suffix}",
        )
        sim_rows = [row for row in rows if row["cov_sim"] is not None]
        if sim_rows:
            ax.errorbar(
                [row["lambda_ap"] for row in sim_rows],
                [row["cov_sim"] for row in sim_rows],
                yerr=[row["ci"] or 0.0 for row in sim_rows],
                fmt="o",
                linestyle="none",
                markerfacecolor="none",
                color=color,
                label=f"cov_sim, {suffix}",
            )


_PLOTTERS = {"fig1": _plot_fig1, "fig2": _plot_fig2, "fig3": _plot_fig3}


def build_figure(data: FigureData, style: Mapping[str, object] | None = None):
    """Assemble the matplotlib figure for validated data; returns (fig, ax)."""
    style = style or {}
    fig, ax = plt.subplots(figsize=style.get("figsize", _DEFAULT_FIGSIZE))
    _PLOTTERS[data.kind](ax, data)
    ax.set_xscale("log")
    ax.set_xlabel(_X_LABEL[data.kind])
    ax.set_ylabel(_Y_LABEL[data.kind])
    ax.set_ylim(-0.05, 1.05)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize="small")
    title = style.get("title")
    if title:
        ax.set_title(str(title))
    fig.tight_layout()
    return fig, ax


def render(spec: PlotSpec) -> Path:
    """Validate the CSV, draw the figure, write the image, return its path.

    All validation happens before the output path is touched, so a bad CSV
    never leaves a file behind.
    """
    data = load_figure_csv(spec.csv_path, spec.kind)
    validate_figure_data(data)
    fig, _ = build_figure(data, spec.style)
    try:
        fig.savefig(spec.out_path, dpi=int(spec.style.get("dpi", _DEFAULT_DPI)))
    finally:
        plt.close(fig)
    return Path(spec.out_path)
