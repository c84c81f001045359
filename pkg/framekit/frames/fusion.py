"""
Weighted frames and frames of subspaces (fusion frames).

A subspace H_j is stored as an orthonormal d x n_j basis B_j, so the
orthogonal projection is pi_j = B_j B_j*.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from framekit.errors import DimMismatch, InvalidInput, ProjectsOntoSpan
from framekit.frames.family import FamilyMatrix, make_family
from framekit.frames.frame_ops import diagnostics, diagnostics_from_operator
from framekit.linalg.spectral import HermitianMatrix, RankTolerance, SpectralOperator, resolve_tolerance
from framekit.models import BoundTransferReport, FrameDiagnostics, FusionReport

logger = logging.getLogger(__name__)

ORTHONORMAL_TOL = 1e-10
FUSION_RECONSTRUCTION_TOL = 1e-8
BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class WeightedFamily:
    """Family psi_k with positive weights v_k, one per column."""

    base: FamilyMatrix
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True).reshape(-1)
        if w.shape[0] != self.base.count:
            raise DimMismatch(f"expected {self.base.count} weights, got {w.shape[0]}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InvalidInput("weights must be finite and > 0")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def weighted_to_plain(family: WeightedFamily) -> FamilyMatrix:
    """Columns v_k psi_k, so S = sum v_k^2 psi_k psi_k*."""
    base = family.base
    return make_family(base.columns * family.weights[np.newaxis, :],
                       label=f"weighted({base.label})", flags=base.flags)


def orthonormal_basis(vectors, tol: float = 1e-12) -> np.ndarray:
    """Classical Gram-Schmidt with one reorthogonalization pass; dependent columns are dropped."""
    a = np.asarray(vectors, dtype=np.complex128)
    if a.ndim == 1:
        a = a[:, np.newaxis]
    if a.ndim != 2 or a.shape[1] == 0:
        raise InvalidInput(f"subspace basis must be a non-empty d x n matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("subspace basis has non-finite entries")
    scale = max(float(np.max(np.linalg.norm(a, axis=0))), 0.0)
    kept: List[np.ndarray] = []
    for j in range(a.shape[1]):
        v = a[:, j].copy()
        for _ in range(2):
            if kept:
                q = np.column_stack(kept)
                v = v - q @ (q.conj().T @ v)
        norm = float(np.linalg.norm(v))
        if norm > tol * scale:
            kept.append(v / norm)
    if not kept:
        raise InvalidInput("subspace basis is numerically zero")
    return np.column_stack(kept)


@dataclass(frozen=True)
class SubspaceFamily:
    """Orthonormal bases B_j of subspaces H_j with weights v_j."""

    bases: Tuple[np.ndarray, ...]
    weights: np.ndarray
    label: str = ""

    def __post_init__(self):
        bases = tuple(np.array(b, dtype=np.complex128, copy=True) for b in self.bases)
        if not bases:
            raise InvalidInput("a subspace family needs at least one subspace")
        dim = bases[0].shape[0]
        for j, b in enumerate(bases):
            if b.ndim != 2 or b.shape[0] != dim or b.shape[1] == 0:
                raise DimMismatch(f"subspace {j} basis has shape {b.shape}, expected ({dim}, n_j)")
            defect = float(np.max(np.abs(b.conj().T @ b - np.eye(b.shape[1]))))
            if defect > ORTHONORMAL_TOL:
                raise InvalidInput(f"subspace {j} basis is not orthonormal (defect {defect:.3g})")
            b.setflags(write=False)
        w = np.array(self.weights, dtype=float, copy=True).reshape(-1)
        if w.shape[0] != len(bases):
            raise DimMismatch(f"expected {len(bases)} weights, got {w.shape[0]}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InvalidInput("subspace weights must be finite and > 0")
        w.setflags(write=False)
        object.__setattr__(self, "bases", bases)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.bases[0].shape[0]

    def __len__(self) -> int:
        return len(self.bases)

    def projector(self, j: int) -> np.ndarray:
        b = self.bases[j]
        return b @ b.conj().T


def make_subspace_family(bases: Sequence, weights: Optional[Sequence[float]] = None,
                         label: str = "") -> SubspaceFamily:
    """Orthonormalize each spanning set and attach weights (default 1)."""
    ortho = tuple(orthonormal_basis(b) for b in bases)
    if weights is None:
        weights = np.ones(len(ortho))
    return SubspaceFamily(bases=ortho, weights=np.asarray(weights, dtype=float), label=label)


def _hvector(family: SubspaceFamily, f) -> np.ndarray:
    v = np.asarray(f, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] != family.dim:
        raise DimMismatch(f"vector must have length {family.dim}, got shape {v.shape}")
    return v


def fusion_analysis(family: SubspaceFamily, f) -> List[np.ndarray]:
    """{v_j pi_j f}_j."""
    f = _hvector(family, f)
    return [v * (b @ (b.conj().T @ f)) for b, v in zip(family.bases, family.weights)]


def fusion_synthesis(family: SubspaceFamily, components: Sequence) -> np.ndarray:
    """sum_j v_j pi_j g_j, the adjoint of fusion_analysis."""
    if len(components) != len(family):
        raise DimMismatch(f"expected {len(family)} components, got {len(components)}")
    out = np.zeros(family.dim, dtype=np.complex128)
    for b, v, g in zip(family.bases, family.weights, components):
        g = _hvector(family, g)
        out += v * (b @ (b.conj().T @ g))
    return out


def fusion_frame_operator(family: SubspaceFamily) -> HermitianMatrix:
    """S = sum_j v_j^2 B_j B_j*."""
    s = np.zeros((family.dim, family.dim), dtype=np.complex128)
    for b, v in zip(family.bases, family.weights):
        s += (v * v) * (b @ b.conj().T)
    return HermitianMatrix(s)


def _fusion_spectral(family: SubspaceFamily) -> SpectralOperator:
    return SpectralOperator(fusion_frame_operator(family))


def fusion_bounds(family: SubspaceFamily, tol: Optional[RankTolerance] = None) -> FrameDiagnostics:
    tol = resolve_tolerance(tol)
    return diagnostics_from_operator(_fusion_spectral(family), tol, label=family.label, count=len(family))


@dataclass(frozen=True)
class FusionReconstruction:
    vector: np.ndarray
    residual: float
    projected: bool = False


def fusion_reconstruct(family: SubspaceFamily, f, tol: Optional[RankTolerance] = None,
                       strict: bool = False) -> FusionReconstruction:
    """f = sum_j v_j^2 S^-1 pi_j f."""
    tol = resolve_tolerance(tol)
    f = _hvector(family, f)
    spectral = _fusion_spectral(family)
    s_pinv = spectral.pinv(tol).entries
    acc = np.zeros(family.dim, dtype=np.complex128)
    for b, v in zip(family.bases, family.weights):
        acc += (v * v) * (b @ (b.conj().T @ f))
    vector = s_pinv @ acc
    norm = float(np.linalg.norm(f))
    residual = float(np.linalg.norm(vector - f)) / norm if norm > 0 else float(np.linalg.norm(vector))
    projected = spectral.rank(tol) < family.dim
    if projected:
        if strict:
            raise ProjectsOntoSpan(
                f"subspaces span rank {spectral.rank(tol)} < {family.dim}; residual {residual:.3g}"
            )
        logger.warning("fusion reconstruction returned the projection onto the joint span")
    return FusionReconstruction(vector=vector, residual=residual, projected=projected)


def fusion_dual(family: SubspaceFamily, tol: Optional[RankTolerance] = None) -> SubspaceFamily:
    """Subspaces S^-1 H_j with the same weights, bases re-orthonormalized."""
    tol = resolve_tolerance(tol)
    spectral = _fusion_spectral(family)
    if spectral.rank(tol) < family.dim:
        logger.warning("fusion family %s does not span: dual taken on the joint span", family.label)
    s_pinv = spectral.pinv(tol).entries
    return SubspaceFamily(
        bases=tuple(orthonormal_basis(s_pinv @ b) for b in family.bases),
        weights=family.weights,
        label=f"dual({family.label})",
    )


def fusion_duality_residual(family: SubspaceFamily, dual: Optional[SubspaceFamily] = None,
                            tol: Optional[RankTolerance] = None) -> float:
    """||sum_j v_j^2 pi~_j S^-1 pi_j - I||_2 for the dual subspaces pi~_j."""
    tol = resolve_tolerance(tol)
    dual = dual or fusion_dual(family, tol)
    if len(dual) != len(family) or dual.dim != family.dim:
        raise DimMismatch("dual subspace family does not match the original")
    s_pinv = _fusion_spectral(family).pinv(tol).entries
    total = np.zeros((family.dim, family.dim), dtype=np.complex128)
    for j, v in enumerate(family.weights):
        total += (v * v) * (dual.projector(j) @ s_pinv @ family.projector(j))
    return float(np.linalg.norm(total - np.eye(family.dim), ord=2))


def principal_angles(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Principal angles between span(a) and span(b), ascending; a, b orthonormal.

    Small angles come from the sines of (I - aa*)b, large ones from the cosines
    of a*b, which keeps both ends accurate.
    """
    if a.shape[0] != b.shape[0]:
        raise DimMismatch(f"bases live in different spaces: {a.shape} vs {b.shape}")
    if b.shape[1] > a.shape[1]:
        a, b = b, a
    cosines = np.clip(np.linalg.svd(a.conj().T @ b, compute_uv=False), 0.0, 1.0)
    sines = np.clip(np.sort(np.linalg.svd(b - a @ (a.conj().T @ b), compute_uv=False)), 0.0, 1.0)
    angles = np.where(cosines ** 2 >= 0.5, np.arcsin(sines), np.arccos(cosines))
    return np.sort(angles)


def max_subspace_angle(first: SubspaceFamily, second: SubspaceFamily) -> float:
    """Largest principal angle over matching subspaces of two families."""
    if len(first) != len(second):
        raise DimMismatch(f"families have {len(first)} and {len(second)} subspaces")
    worst = 0.0
    for a, b in zip(first.bases, second.bases):
        if a.shape[1] != b.shape[1]:
            return math.pi / 2
        worst = max(worst, float(np.max(principal_angles(a, b))))
    return worst


def fusion_diagnostics(family: SubspaceFamily, f=None, tol: Optional[RankTolerance] = None) -> FusionReport:
    """Bounds, dual residual, dual-of-dual angle and, for a given f, the reconstruction residual."""
    tol = resolve_tolerance(tol)
    bounds = fusion_bounds(family, tol)
    report = FusionReport(
        dim=family.dim,
        subspaces=len(family),
        weights=[float(v) for v in family.weights],
        lower_bound=bounds.lower_bound,
        upper_bound=bounds.upper_bound,
        rank_S=bounds.rank_S,
        total=bounds.total,
    )
    if not bounds.total:
        logger.warning("fusion family %s is not total (rank %d < %d)", family.label, bounds.rank_S, family.dim)
        if f is not None:
            report.reconstruction_residual = fusion_reconstruct(family, f, tol).residual
        return report
    dual = fusion_dual(family, tol)
    report.duality_residual = fusion_duality_residual(family, dual, tol)
    report.max_dual_of_dual_angle = max_subspace_angle(family, fusion_dual(dual, tol))
    if f is not None:
        report.reconstruction_residual = fusion_reconstruct(family, f, tol).residual
    return report


def _check_blocks(count: int, blocks: Sequence[Sequence[int]]) -> List[np.ndarray]:
    seen = np.zeros(count, dtype=int)
    out = []
    for block in blocks:
        idx = np.asarray(block, dtype=int).reshape(-1)
        if idx.size == 0 or np.any(idx < 0) or np.any(idx >= count):
            raise InvalidInput(f"block {list(block)} is empty or out of range for {count} columns")
        seen[idx] += 1
        out.append(idx)
    if np.any(seen != 1):
        raise InvalidInput("blocks must partition the columns exactly once")
    return out


def _block_weights(family: WeightedFamily, blocks: List[np.ndarray]) -> np.ndarray:
    weights = []
    for idx in blocks:
        w = family.weights[idx]
        if np.max(np.abs(w - w[0])) > 1e-12 * w[0]:
            raise InvalidInput(f"weights are not constant on block {idx.tolist()}")
        weights.append(float(w[0]))
    return np.asarray(weights)


def subspace_family_from_blocks(family: WeightedFamily, blocks: Sequence[Sequence[int]]) -> SubspaceFamily:
    """Block spans H_j = span{psi_i : i in block j} with the block-constant weights."""
    idx = _check_blocks(family.base.count, blocks)
    weights = _block_weights(family, idx)
    return make_subspace_family([family.base.columns[:, i] for i in idx], weights,
                                label=f"blocks({family.base.label})")


def bound_transfer(family: WeightedFamily, blocks: Sequence[Sequence[int]],
                   tol: Optional[RankTolerance] = None) -> BoundTransferReport:
    """Weighted bounds (m, M) give fusion bounds m/B <= m_F and M_F <= M/A,
    where A_j, B_j are the frame bounds of block j on its span."""
    tol = resolve_tolerance(tol)
    idx = _check_blocks(family.base.count, blocks)
    block_lower, block_upper = [], []
    for i in idx:
        spectral = SpectralOperator.from_array(family.base.columns[:, i] @ family.base.columns[:, i].conj().T)
        block_lower.append(spectral.min_retained(tol))
        block_upper.append(max(spectral.lambda_max, 0.0))
    big_a, big_b = min(block_lower), max(block_upper)

    weighted = diagnostics(weighted_to_plain(family), tol)
    fused = fusion_bounds(subspace_family_from_blocks(family, blocks), tol)
    transferred_lower = weighted.lower_bound / big_b
    transferred_upper = weighted.upper_bound / big_a if big_a > 0 else math.inf
    holds = (transferred_lower <= fused.lower_bound + BOUND_SLACK
             and fused.upper_bound <= transferred_upper + BOUND_SLACK)
    return BoundTransferReport(
        block_lower=block_lower,
        block_upper=block_upper,
        A=big_a,
        B=big_b,
        weighted_lower=weighted.lower_bound,
        weighted_upper=weighted.upper_bound,
        transferred_lower=transferred_lower,
        transferred_upper=transferred_upper,
        fusion_lower=fused.lower_bound,
        fusion_upper=fused.upper_bound,
        holds=holds,
    )
