"""File formats: CSV matrices, JSON report envelopes and plot-ready series."""

from .envelope import SCHEMA, ReportEnvelope, build_envelope, dumps, load_envelope, write_envelope
from .matrix_io import read_family, read_matrix, read_vector, write_blocks, write_family, write_matrix
from .series import TRIPLET_COLUMNS, read_series, write_series, write_sweep_series
from .validators import validate_dims, validate_envelope

__all__ = [
    "SCHEMA",
    "ReportEnvelope",
    "TRIPLET_COLUMNS",
    "build_envelope",
    "dumps",
    "load_envelope",
    "read_family",
    "read_matrix",
    "read_series",
    "read_vector",
    "validate_dims",
    "validate_envelope",
    "write_blocks",
    "write_envelope",
    "write_family",
    "write_matrix",
    "write_series",
    "write_sweep_series",
]
