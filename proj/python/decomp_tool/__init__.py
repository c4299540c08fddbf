"""Dependency-graph decomposition analysis for CS1-style procedural programs."""

__version__ = "0.1.0"

from ._core import (
    DiagnosticError,
    analyze,
    feedback,
    measure,
    render_dot,
    score,
    split_source,
)

__all__ = [
    "__version__",
    "DiagnosticError",
    "analyze",
    "feedback",
    "measure",
    "render_dot",
    "score",
    "split_source",
]
