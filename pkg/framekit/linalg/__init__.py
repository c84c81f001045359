"""Hermitian spectral kernel used by every frame computation."""

from .spectral import (
    IDENTITY,
    INVERSE,
    INVERSE_SQRT,
    SQRT,
    EigenDecomposition,
    HermitianMatrix,
    OperatorFunction,
    RankTolerance,
    SpectralOperator,
    apply_function,
    eig,
    pseudo_inverse,
    resolve_tolerance,
)

__all__ = [
    "IDENTITY",
    "INVERSE",
    "INVERSE_SQRT",
    "SQRT",
    "EigenDecomposition",
    "HermitianMatrix",
    "OperatorFunction",
    "RankTolerance",
    "SpectralOperator",
    "apply_function",
    "eig",
    "pseudo_inverse",
    "resolve_tolerance",
]
