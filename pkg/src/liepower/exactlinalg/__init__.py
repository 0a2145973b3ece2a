"""Exact linear algebra over Z and Z/p."""

from .gf2 import gf2_rank
from .linalg import (
    CompositionNotZero,
    HomologyGroup,
    NotSolvable,
    SmithForm,
    homology_at,
    homology_via_kernel_lattice,
    in_image,
    invariant_factors,
    kernel_basis,
    rank,
    smith_normal_form,
    solve,
)
from .matrix import DimensionMismatch, ExactMatrix, RingMismatch, block_diag, column_vector
from .ring import GF2, GF3, ZZ, RingSpec

__all__ = [
    "GF2",
    "GF3",
    "ZZ",
    "CompositionNotZero",
    "DimensionMismatch",
    "ExactMatrix",
    "HomologyGroup",
    "NotSolvable",
    "RingMismatch",
    "RingSpec",
    "SmithForm",
    "block_diag",
    "column_vector",
    "gf2_rank",
    "homology_at",
    "homology_via_kernel_lattice",
    "in_image",
    "invariant_factors",
    "kernel_basis",
    "rank",
    "smith_normal_form",
    "solve",
]
