"""Time-series graph store and BSP engine."""

from tsgraph._core import (
    Graph,
    InvalidArgumentError,
    UnknownAttributeError,
    UnknownVertexError,
    bench,
    hour_bucket,
    ingest,
)

__all__ = [
    "Graph",
    "InvalidArgumentError",
    "UnknownAttributeError",
    "UnknownVertexError",
    "bench",
    "hour_bucket",
    "ingest",
]

__version__ = "0.1.0"
