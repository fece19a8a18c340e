"""CSV loading and pre-render validation.

The reader is strict on purpose: the upstream tool promises a fixed schema
per figure kind, so any disagreement is a wiring mistake that should fail
with the offending column names rather than render something misleading.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path


class SchemaError(ValueError):
    """CSV header does not match the declared figure kind."""


class PlotDataError(ValueError):
    """CSV content is unusable: empty, malformed, or out of range."""


SCHEMAS: dict[str, tuple[str, ...]] = {
    "fig1": ("lambda_ap", "lambda_ue", "q_analytic", "q_sim", "ci", "draws"),
    "fig2": ("lambda_active", "n", "p_analytic", "p_sim", "ci", "draws", "rejected"),
    "fig3": (
        "lambda_ap",
        "lambda_ue",
        "theta_db",
        "cov_lower",
        "cov_upper",
        "cov_sim",
        "ci",
        "trials",
        "seed",
        "status",
    ),
}

_PROBABILITY_COLUMNS = {
    "fig1": ("q_analytic", "q_sim"),
    "fig2": ("p_analytic", "p_sim"),
    "fig3": ("cov_lower", "cov_upper", "cov_sim"),
}

_X_COLUMN = {"fig1": "lambda_ap", "fig2": "lambda_active", "fig3": "lambda_ap"}

_TEXT_COLUMNS = ("status",)


@dataclass(frozen=True)
class FigureData:
    kind: str
    columns: tuple[str, ...]
    rows: tuple[dict, ...]
    metadata: str

    @property
    def x_column(self) -> str:
        return _X_COLUMN[self.kind]

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]


def _parse_cell(column: str, text: str, where: str):
    if column in _TEXT_COLUMNS:
        return text
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        raise PlotDataError(f"{where}: column {column} holds {text!r}, expected a number") from None


def load_figure_csv(path: str | Path, kind: str) -> FigureData:
    """Read one sweep CSV, enforcing the schema for ``kind``.

    The first line must be the generator's metadata comment; the second
    line must equal the expected header exactly (names and order). Blank
    numeric cells become None.
    """
    if kind not in SCHEMAS:
        raise PlotDataError(f"unknown figure kind {kind!r}; expected one of {sorted(SCHEMAS)}")
    path = Path(path)
    expected = SCHEMAS[kind]
    with path.open(newline="", encoding="utf-8") as handle:
        first = handle.readline()
        if not first.startswith("#"):
            raise PlotDataError(f"{path}: missing metadata comment line")
        metadata = first.lstrip("#").strip()
        reader = csv.reader(handle)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise PlotDataError(f"{path}: no header row") from None
        if header != expected:
            missing = [c for c in expected if c not in header]
            unexpected = [c for c in header if c not in expected]
            parts = [f"header does not match kind {kind}"]
            if missing:
                parts.append(f"missing columns: {', '.join(missing)}")
            if unexpected:
                parts.append(f"unexpected columns: {', '.join(unexpected)}")
            if not missing and not unexpected:
                parts.append(f"column order differs from {', '.join(expected)}")
            raise SchemaError(f"{path}: " + "; ".join(parts))
        rows = []
        for number, raw in enumerate(reader, start=3):
            if len(raw) != len(expected):
                raise PlotDataError(
                    f"{path}:{number}: row has {len(raw)} cells, header has {len(expected)}"
                )
            where = f"{path}:{number}"
            rows.append({c: _parse_cell(c, v, where) for c, v in zip(expected, raw)})
    if not rows:
        raise PlotDataError(f"{path}: no data rows")
    return FigureData(kind=kind, columns=expected, rows=tuple(rows), metadata=metadata)


def validate_figure_data(data: FigureData) -> None:
    """Pre-render assertions: ranges, positive log-axis values, bound order."""
    for number, row in enumerate(data.rows, start=3):
        x = row[data.x_column]
        if x is None or x <= 0.0:
            raise PlotDataError(
                f"row {number}: {data.x_column}={x!r} cannot go on a log axis"
            )
        for column in _PROBABILITY_COLUMNS[data.kind]:
            value = row[column]
            if value is not None and not (0.0 <= value <= 1.0):
                raise PlotDataError(f"row {number}: {column}={value!r} is outside [0, 1]")
        if data.kind == "fig3":
            lower, upper = row["cov_lower"], row["cov_upper"]
            if lower is not None and upper is not None:
                if lower > upper + 1e-12:
                    raise PlotDataError(
                        f"row {number}: cov_lower={lower!r} exceeds cov_upper={upper!r}"
                    )
            elif not str(row["status"]).startswith("numerical_error"):
                raise PlotDataError(f"row {number}: bounds are blank without a numerical_error status")
