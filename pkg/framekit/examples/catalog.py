"""
The worked examples, each returning the report that reproduces it.
"""
import logging
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from config.settings import get_settings
from framekit.examples.affine_cs import AffineCSConfig, frame_operator_residual, gen_affine_cs, x_grid
from framekit.examples.diagonal import diagonal_generator, gen_diagonal
from framekit.examples.multiplier import multiplier_generator
from framekit.frames.dual_recon import dual_bound_check, dual_from_lower, gram_operators, regularity, triplet_report
from framekit.frames.frame_ops import classify_sweep
from framekit.frames.fusion import fusion_diagnostics, make_subspace_family

logger = logging.getLogger(__name__)


class AffineCSExampleReport(BaseModel):
    """Quadrature frame operator against the analytic multiplication operator."""
    r_nodes: int
    x_samples: int
    frame_operator_residual: float
    refinement_residuals: List[float]
    regularity_x_samples: int
    regular: bool
    cutoff_active: bool
    retained_rank: int
    x0_column: int
    x0_residual: float
    x0_regular: bool


def upper_semi_frame(dims: Sequence[int]):
    return classify_sweep(diagonal_generator("pow:-1"), dims)


def lower_semi_frame(dims: Sequence[int]):
    return classify_sweep(diagonal_generator("pow:1"), dims)


def lower_to_upper_dual(dims: Sequence[int]):
    d = dims[-1]
    phi = gen_diagonal("pow:1", d)
    return dual_bound_check(dual_from_lower(phi), phi)


def triplet_norms(dims: Sequence[int]):
    family = gen_diagonal("pow:-1", dims[0])
    c = np.zeros(family.count, dtype=np.complex128)
    c[1] = 1.0
    return triplet_report(family, c, family.columns @ c, gram_operators(family))


def multiplier_unbounded(dims: Sequence[int]):
    return classify_sweep(multiplier_generator("pow:2"), dims)


def multiplier_bounded(dims: Sequence[int]):
    return classify_sweep(multiplier_generator("uniform:0.5,2,7"), dims)


def affine_coherent_states(dims: Sequence[int]) -> AffineCSExampleReport:
    cfg = AffineCSConfig.from_settings()
    # regularity needs N_x >= N_r, a coarser x-grid loses rank to aliasing alone
    resolved = cfg.model_copy(update={"x_samples": max(cfg.x_samples, cfg.r_nodes)})
    report = regularity(gen_affine_cs(resolved))
    # an even uniform grid contains x = 0
    x, _ = x_grid(resolved)
    k0 = int(np.argmin(np.abs(x)))
    x0_residual = report.column_residuals[k0]
    return AffineCSExampleReport(
        r_nodes=cfg.r_nodes,
        x_samples=cfg.x_samples,
        frame_operator_residual=frame_operator_residual(cfg),
        refinement_residuals=[frame_operator_residual(cfg.refined(level)) for level in (1, 2)],
        regularity_x_samples=resolved.x_samples,
        regular=report.regular,
        cutoff_active=report.cutoff_active,
        retained_rank=report.retained_rank,
        x0_column=k0,
        x0_residual=x0_residual,
        x0_regular=x0_residual <= get_settings().numerics.regularity_tol,
    )


def orthogonal_fusion(dims: Sequence[int]):
    d = dims[0]
    eye = np.eye(d)
    family = make_subspace_family([eye[:, : d // 2], eye[:, d // 2:]], label="orthogonal")
    return fusion_diagnostics(family, np.arange(1, d + 1, dtype=float))


WORKED_EXAMPLES: Dict[str, Callable[[Sequence[int]], BaseModel]] = {
    "upper_semi_frame": upper_semi_frame,
    "lower_semi_frame": lower_semi_frame,
    "lower_to_upper_dual": lower_to_upper_dual,
    "triplet_norms": triplet_norms,
    "multiplier_unbounded": multiplier_unbounded,
    "multiplier_bounded": multiplier_bounded,
    "affine_coherent_states": affine_coherent_states,
    "orthogonal_fusion": orthogonal_fusion,
}


def run_worked_examples(dims: Optional[Sequence[int]] = None,
                        names: Optional[Sequence[str]] = None) -> Dict[str, BaseModel]:
    dims = list(dims or get_settings().sweep.default_dims)
    selected = names or list(WORKED_EXAMPLES)
    results = {}
    for name in selected:
        logger.info("running example %s", name)
        results[name] = WORKED_EXAMPLES[name](dims)
    return results
