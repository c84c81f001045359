"""
Analysis, synthesis and frame operators, sharp frame bounds, and the
frame / semi-frame classification of truncation sweeps.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Union

import numpy as np

from config.settings import get_settings
from framekit.errors import DimMismatch, InvalidInput
from framekit.frames.family import FamilyGenerator, FamilyMatrix, TruncationSweep
from framekit.linalg.spectral import HermitianMatrix, RankTolerance, SpectralOperator, resolve_tolerance
from framekit.models import FrameDiagnostics, SweepPoint, SweepVerdict, Verdict

logger = logging.getLogger(__name__)


def _vector(x, length: int, what: str) -> np.ndarray:
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] != length:
        raise DimMismatch(f"{what} must have length {length}, got shape {v.shape}")
    return v


def analysis(family: FamilyMatrix, f) -> np.ndarray:
    """(Cf)_k = <psi_k, f>, conjugate-linear in the first argument."""
    return family.analysis_matrix @ _vector(f, family.dim, "vector")


def synthesis(family: FamilyMatrix, c) -> np.ndarray:
    """Dc = sum_k c_k psi_k."""
    return family.columns @ _vector(c, family.count, "coefficients")


def frame_operator(family: FamilyMatrix) -> HermitianMatrix:
    """S = D C = sum_k psi_k psi_k*."""
    return family.frame_spectral.matrix


def diagnostics_from_operator(operator: SpectralOperator, tol: RankTolerance,
                              label: str = "", count: int = 0) -> FrameDiagnostics:
    upper = max(operator.lambda_max, 0.0)
    rank = operator.rank(tol)
    total = rank == operator.dim
    lower = max(operator.lambda_min, 0.0) if total else 0.0
    condition = upper / lower if lower > 0 else math.inf
    return FrameDiagnostics(
        label=label,
        dim=operator.dim,
        count=count,
        lower_bound=lower,
        upper_bound=upper,
        rank_S=rank,
        total=total,
        condition=condition,
        cutoff=tol.relative_cutoff,
    )


def diagnostics(family: FamilyMatrix, tol: Optional[RankTolerance] = None) -> FrameDiagnostics:
    """m = lambda_min(S), M = lambda_max(S); m is reported as 0 below the cutoff."""
    tol = resolve_tolerance(tol)
    return diagnostics_from_operator(family.frame_spectral, tol, label=family.label, count=family.count)


def _fit_exponent(dims: Sequence[int], values: Sequence[float]) -> Optional[float]:
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        return None
    slope, _ = np.polyfit(np.log(np.asarray(dims, dtype=float)), np.log(values), 1)
    return float(slope)


def decide_verdict(alpha: Optional[float], beta: Optional[float], all_total: bool, any_total: bool,
                   bounded: float, unbounded: float) -> Verdict:
    if not any_total:
        return Verdict.NEITHER
    if not all_total or alpha is None or beta is None:
        return Verdict.INCONCLUSIVE
    m_bounded = abs(alpha) < bounded
    big_m_bounded = abs(beta) < bounded
    if m_bounded and big_m_bounded:
        return Verdict.FRAME
    if big_m_bounded and alpha < -unbounded:
        return Verdict.UPPER_SEMI_FRAME
    if m_bounded and beta > unbounded:
        return Verdict.LOWER_SEMI_FRAME
    if alpha < -unbounded and beta > unbounded:
        return Verdict.NEITHER
    return Verdict.INCONCLUSIVE


def classify_sweep(generator: FamilyGenerator, dims: Union[Sequence[int], TruncationSweep, None] = None,
                   tol: Optional[RankTolerance] = None,
                   bounded_exponent: Optional[float] = None,
                   unbounded_exponent: Optional[float] = None,
                   workers: Optional[int] = None) -> SweepVerdict:
    """Fit log m(d), log M(d) against log d and apply the semi-frame rules."""
    sweep_cfg = get_settings().sweep
    sweep = TruncationSweep.coerce(dims)
    if len(sweep) < 3:
        raise InvalidInput(f"classification needs at least 3 truncations, got {len(sweep)}")
    tol = resolve_tolerance(tol)
    bounded = sweep_cfg.bounded_exponent if bounded_exponent is None else bounded_exponent
    unbounded = sweep_cfg.unbounded_exponent if unbounded_exponent is None else unbounded_exponent
    workers = sweep_cfg.workers if workers is None else workers

    def evaluate(d: int) -> FrameDiagnostics:
        diag = diagnostics(generator.produce(d), tol)
        logger.info("sweep %s d=%d m=%.6g M=%.6g rank=%d", generator.label, d,
                    diag.lower_bound, diag.upper_bound, diag.rank_S)
        return diag

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results: List[FrameDiagnostics] = list(pool.map(evaluate, sweep.dims))
    else:
        results = [evaluate(d) for d in sweep.dims]

    points = [
        SweepPoint(d=d, lower_bound=r.lower_bound, upper_bound=r.upper_bound,
                   rank_S=r.rank_S, total=r.total, condition=r.condition)
        for d, r in zip(sweep.dims, results)
    ]
    all_total = all(p.total for p in points)
    any_total = any(p.total for p in points)
    if not all_total:
        logger.warning("sweep %s: non-total truncations at d=%s", generator.label,
                       [p.d for p in points if not p.total])

    alpha = _fit_exponent(sweep.dims, [p.lower_bound for p in points]) if all_total else None
    beta = _fit_exponent(sweep.dims, [p.upper_bound for p in points])
    verdict = decide_verdict(alpha, beta, all_total, any_total, bounded, unbounded)
    return SweepVerdict(
        label=generator.label,
        points=points,
        alpha=alpha,
        beta=beta,
        verdict=verdict,
        bounded_exponent=bounded,
        unbounded_exponent=unbounded,
    )


def single_verdict(diag: FrameDiagnostics) -> Verdict:
    """At a fixed finite dimension every total family is a frame."""
    return Verdict.FRAME if diag.total else Verdict.NEITHER
