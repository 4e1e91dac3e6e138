"""Stabilizer-code error correction under quasistatic phase damping."""

__version__ = "0.1.0"

from .codes import (
    StabilizerCode,
    Syndrome,
    ZString,
    build_repetition_code,
    build_surface_code,
)
from .coherent import NoiseParams, build_coset_table, run_shot

__all__ = [
    "StabilizerCode",
    "Syndrome",
    "ZString",
    "build_repetition_code",
    "build_surface_code",
    "NoiseParams",
    "build_coset_table",
    "run_shot",
    "__version__",
]
