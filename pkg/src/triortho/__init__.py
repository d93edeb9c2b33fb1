"""Construction, analysis and decoding of binary triorthogonal CSS codes."""

from . import analysis, channel, cost, decoders, gf2, ilp, matrix_io, simulate
from .analysis import CssCode, assemble_css, dual_distance, is_triorthogonal, quantum_distances
from .decoders import DecoderConfig
from .ilp import build_instance, extract_matrix, orbit_partition, solve

__version__ = "0.1.0"

__all__ = [
    "CssCode",
    "DecoderConfig",
    "analysis",
    "assemble_css",
    "build_instance",
    "channel",
    "cost",
    "decoders",
    "dual_distance",
    "extract_matrix",
    "gf2",
    "ilp",
    "is_triorthogonal",
    "matrix_io",
    "orbit_partition",
    "quantum_distances",
    "simulate",
    "solve",
]
