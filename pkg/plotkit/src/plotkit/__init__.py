"""plotkit: publication-style figures from ergoshield CSV outputs."""

__version__ = "0.1.0"

from .figures import (render, render_heatmap, render_rwa,
                      render_scaling_panel, render_timeseries,
                      usc_shade_start)
from .schema import SCHEMAS, SchemaError, Table, read_table

__all__ = [
    "__version__", "render", "render_timeseries", "render_heatmap",
    "render_scaling_panel", "render_rwa", "usc_shade_start",
    "read_table", "Table", "SchemaError", "SCHEMAS",
]
