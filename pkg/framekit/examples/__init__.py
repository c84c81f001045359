"""Generators for the worked examples: diagonal sequences, affine coherent states, multipliers."""

from .affine_cs import (
    AffineCSConfig,
    affine_cs_generator,
    affine_cs_kernel,
    analytic_frame_operator,
    default_mother,
    frame_operator_residual,
    gen_affine_cs,
    x_grid,
)
from .diagonal import diagonal_generator, gen_diagonal
from .multiplier import MultiplierModel, gen_multiplier, multiplier_generator
from .weights import DiagonalWeights, WeightRule, explicit_weights, parse_weight_rule

__all__ = [
    "AffineCSConfig",
    "DiagonalWeights",
    "MultiplierModel",
    "WeightRule",
    "affine_cs_generator",
    "affine_cs_kernel",
    "analytic_frame_operator",
    "default_mother",
    "diagonal_generator",
    "explicit_weights",
    "frame_operator_residual",
    "gen_affine_cs",
    "gen_diagonal",
    "gen_multiplier",
    "multiplier_generator",
    "parse_weight_rule",
    "x_grid",
]
