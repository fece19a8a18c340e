"""Figure rendering for cellcov3d sweep CSVs.

Consumes the runner's CSV files as published (schema and all) and turns
them into image files: analytic series as lines, simulated series as
markers. No model quantity is ever recomputed here; the CSVs are the
single source of numerical truth.
"""

from .reader import FigureData, PlotDataError, SchemaError, load_figure_csv, validate_figure_data
from .render import PlotSpec, build_figure, render

__version__ = "0.1.0"

__all__ = [
    "FigureData",
    "PlotDataError",
    "PlotSpec",
    "SchemaError",
    "__version__",
    "build_figure",
    "load_figure_csv",
    "render",
    "validate_figure_data",
]
