from .figures import (
    METRICS, PALETTE, FigureSpec, FigureData, SchemaError, Series,
    build_figures, load_rows, render, render_figure,
)

__version__ = "0.1.0"

__all__ = ["METRICS", "PALETTE", "FigureSpec", "FigureData", "SchemaError",
           "Series", "build_figures", "load_rows", "render", "render_figure",
           "__version__"]
