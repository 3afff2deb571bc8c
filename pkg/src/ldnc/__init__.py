"""Linear deterministic network coding over prime fields.

Model networks of finite-field channels, compute the end-to-end transfer
matrices of layered linear codes, build reciprocal networks and
transposed codes, unfold arbitrary networks into layered ones, and
search small instances for solving codes.
"""

from __future__ import annotations

from .coding import LinearCode, TransferMap, is_solving, simulate, transfer_matrices
from .gf_linalg import (
    FieldModulus,
    GfMatrix,
    as_shift_strength,
    block_embed,
    flip_matrix,
    identity,
    is_kronecker_delta_identity,
    shift_matrix,
    zeros,
)
from .layering import (
    UnfoldedNetwork,
    UnlayeredLinearScheme,
    lift_code,
    project_code,
    simulate_unlayered,
    unfold,
)
from .network import (
    Edge,
    LayeredNetwork,
    Network,
    Session,
    ValidationReport,
    detect_layers,
    network,
    reciprocal,
    reciprocal_layered,
    validate,
)
from .reciprocity import (
    ReciprocityReport,
    physical_code,
    physical_reverse,
    transpose_code,
    verify_reciprocity,
)
from .search import (
    SearchResult,
    candidate_code,
    candidate_count,
    exhaustive_search,
    free_entry_count,
    random_search,
)

__version__ = "0.1.0"

__all__ = [
    "Edge",
    "FieldModulus",
    "GfMatrix",
    "LayeredNetwork",
    "LinearCode",
    "Network",
    "ReciprocityReport",
    "SearchResult",
    "Session",
    "TransferMap",
    "UnfoldedNetwork",
    "UnlayeredLinearScheme",
    "ValidationReport",
    "as_shift_strength",
    "block_embed",
    "candidate_code",
    "candidate_count",
    "detect_layers",
    "exhaustive_search",
    "flip_matrix",
    "free_entry_count",
    "identity",
    "is_kronecker_delta_identity",
    "is_solving",
    "lift_code",
    "network",
    "physical_code",
    "physical_reverse",
    "project_code",
    "random_search",
    "reciprocal",
    "reciprocal_layered",
    "shift_matrix",
    "simulate",
    "simulate_unlayered",
    "transfer_matrices",
    "transpose_code",
    "unfold",
    "validate",
    "verify_reciprocity",
    "zeros",
]
