"""Families, frame operators, duals, reconstructions and fusion frames."""

from .dual_recon import (
    GramOperators,
    KernelMatrix,
    Reconstruction,
    canonical_dual,
    canonical_tight,
    commutation_residuals,
    dual_bound_check,
    dual_from_lower,
    duality_residual,
    gram_operators,
    is_dual_pair,
    kernel_matrix,
    projection_P,
    psi_inner,
    reconstruct_full,
    reconstruct_frame,
    reconstruct_from_coefficients,
    reconstruct_RD,
    reconstruction_report,
    regularity,
    sqrt_factorization_check,
    triplet_report,
)
from .family import FamilyGenerator, FamilyMatrix, TruncationSweep, explicit_generator, make_family, truncate
from .frame_ops import analysis, classify_sweep, diagnostics, frame_operator, single_verdict, synthesis
from .fusion import (
    SubspaceFamily,
    WeightedFamily,
    bound_transfer,
    fusion_analysis,
    fusion_diagnostics,
    fusion_dual,
    fusion_duality_residual,
    fusion_frame_operator,
    fusion_reconstruct,
    fusion_synthesis,
    make_subspace_family,
    principal_angles,
    subspace_family_from_blocks,
    weighted_to_plain,
)

__all__ = [
    "FamilyGenerator",
    "FamilyMatrix",
    "GramOperators",
    "KernelMatrix",
    "Reconstruction",
    "SubspaceFamily",
    "TruncationSweep",
    "WeightedFamily",
    "analysis",
    "bound_transfer",
    "canonical_dual",
    "canonical_tight",
    "classify_sweep",
    "commutation_residuals",
    "diagnostics",
    "dual_bound_check",
    "dual_from_lower",
    "duality_residual",
    "explicit_generator",
    "frame_operator",
    "fusion_analysis",
    "fusion_diagnostics",
    "fusion_dual",
    "fusion_duality_residual",
    "fusion_frame_operator",
    "fusion_reconstruct",
    "fusion_synthesis",
    "gram_operators",
    "is_dual_pair",
    "kernel_matrix",
    "make_family",
    "make_subspace_family",
    "principal_angles",
    "projection_P",
    "psi_inner",
    "reconstruct_full",
    "reconstruct_frame",
    "reconstruct_from_coefficients",
    "reconstruct_RD",
    "reconstruction_report",
    "regularity",
    "single_verdict",
    "sqrt_factorization_check",
    "synthesis",
    "subspace_family_from_blocks",
    "truncate",
    "weighted_to_plain",
]
