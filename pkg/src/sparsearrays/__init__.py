"""Sparse linear arrays with contiguous sum and difference co-arrays.

Array constructions (nested, concatenated nested, Kløve), co-array
metrics, minimum-redundancy parameter selection, exhaustive MRA search and
an OMP-based active sensing simulator.
"""
__version__ = "0.1.0"

from .coarray import (  # noqa: E402
    ArrayMetrics,
    CoArray,
    CoArrayKind,
    SensorArray,
    contiguous_dof,
    diff_coarray,
    first_hole,
    metrics,
    sum_coarray,
    varsigma,
    weights,
)
from .constructions import (  # noqa: E402
    KloveParams,
    NestedParams,
    ShiftedGenerator,
    build,
    cna,
    ka,
    kma,
    nested,
    symmetrize,
    ula,
)

__all__ = [
    "ArrayMetrics", "CoArray", "CoArrayKind", "SensorArray", "contiguous_dof", "diff_coarray",
    "first_hole", "metrics", "sum_coarray", "varsigma", "weights", "KloveParams", "NestedParams",
    "ShiftedGenerator", "build", "cna", "ka", "kma", "nested", "symmetrize", "ula",
]
