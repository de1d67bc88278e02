"""Figures from rqcd experiment trace CSVs."""

from .figures import LOG_FLOOR, FigureSpec, RenderResult, render
from .traces import SCHEMA, TraceRun, load_runs, nearest_rank_quantile, ragged_mean, ragged_quantile, read_trace

__all__ = [
    "LOG_FLOOR",
    "FigureSpec",
    "RenderResult",
    "SCHEMA",
    "TraceRun",
    "load_runs",
    "nearest_rank_quantile",
    "ragged_mean",
    "ragged_quantile",
    "read_trace",
    "render",
]
