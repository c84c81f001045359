"""
Canonical duals, the projection P_Psi, Gram-side operators G^{+-1}, G^{+-1/2},
the Psi-weighted inner products and triplet norms, reproducing kernels,
reconstruction formulas and the lower -> upper duality construction.

All inverses are truncated spectral pseudo-inverses sharing one RankTolerance.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from config.settings import get_settings
from framekit.errors import DimMismatch, NotLowerSemiFrame, ProjectsOntoSpan
from framekit.frames.family import FamilyMatrix, make_family
from framekit.frames.frame_ops import analysis, diagnostics
from framekit.linalg.spectral import HermitianMatrix, RankTolerance, pseudo_inverse, resolve_tolerance
from framekit.models import (
    DualityReport,
    ReconstructionFormula,
    ReconstructionReport,
    ReconstructionResidual,
    RegularityReport,
    SqrtFactorizationReport,
    TripletReport,
)

logger = logging.getLogger(__name__)

RECONSTRUCTION_TOL = 1e-8
SQRT_FACTORIZATION_TOL = 1e-7
RANGE_TOL = 1e-9


def _relative(residual: float, scale: float) -> float:
    return residual / scale if scale > 0 else residual


@dataclass(frozen=True)
class GramOperators:
    """G = (columns)*(columns) and its spectral functions."""

    G: HermitianMatrix
    G_pinv: HermitianMatrix
    G_half: HermitianMatrix
    G_minus_half: HermitianMatrix
    retained_rank: int
    lambda_max: float
    lambda_min_retained: float

    @property
    def count(self) -> int:
        return self.G.dim

    @property
    def range_projector(self) -> np.ndarray:
        return self.G_minus_half.entries @ self.G_half.entries

    def range_defect(self, c: np.ndarray) -> float:
        """||(I - P_range) c|| / ||c||."""
        norm = float(np.linalg.norm(c))
        return _relative(float(np.linalg.norm(c - self.range_projector @ c)), norm)


@dataclass(frozen=True)
class KernelMatrix:
    """Reproducing kernel entries K_{k,l} = <psi_k, S^-1 psi_l>."""

    entries: np.ndarray

    def reproduces(self, c: np.ndarray) -> float:
        """Relative residual of K c = c."""
        return _relative(float(np.linalg.norm(self.entries @ c - c)), float(np.linalg.norm(c)))


@dataclass(frozen=True)
class Reconstruction:
    """Result of a reconstruction formula."""

    vector: np.ndarray
    formula: ReconstructionFormula
    residual: float
    projected: bool = False

    def as_residual(self) -> ReconstructionResidual:
        return ReconstructionResidual(formula=self.formula, residual=self.residual, projected=self.projected)


def _frame_pinv(family: FamilyMatrix, tol: RankTolerance) -> np.ndarray:
    return family.frame_spectral.pinv(tol).entries


def _is_total(family: FamilyMatrix, tol: RankTolerance) -> bool:
    return family.frame_spectral.rank(tol) == family.dim


def canonical_dual(family: FamilyMatrix, tol: Optional[RankTolerance] = None) -> FamilyMatrix:
    """psi~_k = S^-1 psi_k; flagged dual_on_range when Psi is not total."""
    tol = resolve_tolerance(tol)
    flags = set()
    if not _is_total(family, tol):
        flags.add("dual_on_range")
        logger.warning("family %s is not total: canonical dual computed on its span", family.label)
    return make_family(_frame_pinv(family, tol) @ family.columns,
                       label=f"dual({family.label})", flags=flags)


def canonical_tight(family: FamilyMatrix, tol: Optional[RankTolerance] = None) -> FamilyMatrix:
    """S^-1/2 psi_k, a Parseval frame for the span of Psi."""
    tol = resolve_tolerance(tol)
    root = family.frame_spectral.inverse_sqrt(tol).entries
    return make_family(root @ family.columns, label=f"tight({family.label})")


def projection_P(family: FamilyMatrix, tol: Optional[RankTolerance] = None) -> np.ndarray:
    """P_Psi = C S^-1 D, the orthogonal projection of the coefficient space onto range(C)."""
    tol = resolve_tolerance(tol)
    if not _is_total(family, tol):
        logger.warning("family %s is not total: P_Psi computed with the pseudo-inverse", family.label)
    c = family.analysis_matrix
    p = c @ _frame_pinv(family, tol) @ family.columns
    return 0.5 * (p + p.conj().T)


def gram_operators(family: FamilyMatrix, tol: Optional[RankTolerance] = None) -> GramOperators:
    """G = C D on the coefficient space with G^+, G^1/2 and G^-1/2."""
    tol = resolve_tolerance(tol)
    spectral = family.gram_spectral
    return GramOperators(
        G=spectral.matrix,
        G_pinv=spectral.pinv(tol),
        G_half=spectral.sqrt(tol),
        G_minus_half=spectral.inverse_sqrt(tol),
        retained_rank=spectral.rank(tol),
        lambda_max=max(spectral.lambda_max, 0.0),
        lambda_min_retained=spectral.min_retained(tol),
    )


def _coefficients(x, gram: GramOperators, what: str) -> np.ndarray:
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] != gram.count:
        raise DimMismatch(f"{what} must have length {gram.count}, got shape {v.shape}")
    return v


def psi_inner(c, d, gram: GramOperators) -> complex:
    """<c, d>_Psi = <c, G^-1 d>, after projecting c, d onto range(C)."""
    c = _coefficients(c, gram, "c")
    d = _coefficients(d, gram, "d")
    if gram.range_defect(c) > RANGE_TOL or gram.range_defect(d) > RANGE_TOL:
        logger.warning("psi_inner: coefficients outside range(C) were projected onto it")
        proj = gram.range_projector
        c, d = proj @ c, proj @ d
    return complex(np.vdot(c, gram.G_pinv.entries @ d))


def _flag_projection(family: FamilyMatrix, formula: ReconstructionFormula, vector: np.ndarray,
                     f: np.ndarray, projected: bool, strict: bool) -> Reconstruction:
    residual = _relative(float(np.linalg.norm(vector - f)), float(np.linalg.norm(f)))
    if projected:
        if strict:
            raise ProjectsOntoSpan(
                f"{formula.value}: family {family.label!r} does not span the space (residual {residual:.3g})"
            )
        logger.warning("%s on %s returned the projection onto the span", formula.value, family.label)
    return Reconstruction(vector=vector, formula=formula, residual=residual, projected=projected)


def reconstruct_frame(family: FamilyMatrix, f, tol: Optional[RankTolerance] = None,
                      variant: ReconstructionFormula = ReconstructionFormula.SREPR,
                      strict: bool = False) -> Reconstruction:
    """f = sum <psi_k, f> S^-1 psi_k (srepr) or f = sum <S^-1 psi_k, f> psi_k (srepr2)."""
    tol = resolve_tolerance(tol)
    variant = ReconstructionFormula(variant)
    f = np.asarray(f, dtype=np.complex128)
    coeffs = analysis(family, f)
    s_pinv = _frame_pinv(family, tol)
    if variant is ReconstructionFormula.SREPR:
        vector = s_pinv @ (family.columns @ coeffs)
    elif variant is ReconstructionFormula.SREPR2:
        dual_coeffs = (s_pinv @ family.columns).conj().T @ f
        vector = family.columns @ dual_coeffs
    else:
        raise ValueError(f"reconstruct_frame handles srepr/srepr2, not {variant.value}")
    return _flag_projection(family, variant, vector, f, not _is_total(family, tol), strict)


def reconstruct_RD(family: FamilyMatrix, f, gram: Optional[GramOperators] = None,
                   tol: Optional[RankTolerance] = None, strict: bool = False) -> Reconstruction:
    """f = D G^-1 C f for f in range(D)."""
    tol = resolve_tolerance(tol)
    gram = gram or gram_operators(family, tol)
    f = np.asarray(f, dtype=np.complex128)
    vector = family.columns @ (gram.G_pinv.entries @ analysis(family, f))
    residual = _relative(float(np.linalg.norm(vector - f)), float(np.linalg.norm(f)))
    return _flag_projection(family, ReconstructionFormula.RD, vector, f,
                            residual > RECONSTRUCTION_TOL and not _is_total(family, tol), strict)


def sqrt_factorization_check(family: FamilyMatrix, tol: Optional[RankTolerance] = None) -> SqrtFactorizationReport:
    """Compare S^1/2 with D G^-1/2 C."""
    tol = resolve_tolerance(tol)
    s_half = family.frame_spectral.sqrt(tol).entries
    g_minus_half = family.gram_spectral.inverse_sqrt(tol).entries
    product = family.columns @ g_minus_half @ family.analysis_matrix
    scale = float(np.max(np.abs(s_half)))
    residual = _relative(float(np.max(np.abs(s_half - product))), scale)
    return SqrtFactorizationReport(residual=residual, passed=residual <= SQRT_FACTORIZATION_TOL)


def reconstruct_full(family: FamilyMatrix, f, gram: Optional[GramOperators] = None,
                     tol: Optional[RankTolerance] = None, strict: bool = False) -> Reconstruction:
    """f = S^-1/2 D G^-1/2 C f."""
    tol = resolve_tolerance(tol)
    gram = gram or gram_operators(family, tol)
    f = np.asarray(f, dtype=np.complex128)
    s_minus_half = family.frame_spectral.inverse_sqrt(tol).entries
    vector = s_minus_half @ (family.columns @ (gram.G_minus_half.entries @ analysis(family, f)))
    return _flag_projection(family, ReconstructionFormula.FULL, vector, f,
                            not _is_total(family, tol), strict)


def reconstruct_from_coefficients(family: FamilyMatrix, coefficients,
                                  tol: Optional[RankTolerance] = None) -> Reconstruction:
    """f' = sum F_k S^-1 psi_k for F = C f'. The residual is the range defect of F."""
    tol = resolve_tolerance(tol)
    coefficients = np.asarray(coefficients, dtype=np.complex128)
    if coefficients.ndim != 1 or coefficients.shape[0] != family.count:
        raise DimMismatch(f"coefficients must have length {family.count}, got shape {coefficients.shape}")
    vector = _frame_pinv(family, tol) @ (family.columns @ coefficients)
    p = projection_P(family, tol)
    defect = _relative(float(np.linalg.norm(coefficients - p @ coefficients)),
                       float(np.linalg.norm(coefficients)))
    return Reconstruction(vector=vector, formula=ReconstructionFormula.COEFFICIENTS,
                          residual=defect, projected=defect > RANGE_TOL)


def kernel_matrix(family: FamilyMatrix, tol: Optional[RankTolerance] = None) -> KernelMatrix:
    """K_{k,l} = <psi_k, S^-1 psi_l> = <psi_k, psi~_l>."""
    tol = resolve_tolerance(tol)
    dual_columns = _frame_pinv(family, tol) @ family.columns
    entries = family.analysis_matrix @ dual_columns
    return KernelMatrix(entries=0.5 * (entries + entries.conj().T))


def triplet_report(family: FamilyMatrix, c, f, gram: Optional[GramOperators] = None,
                   tol: Optional[RankTolerance] = None) -> TripletReport:
    """Norms of c in H_Psi, H_0, H_Psi^x (and the smaller C(R_S)), and of f on the H side."""
    tol = resolve_tolerance(tol)
    gram = gram or gram_operators(family, tol)
    c = _coefficients(c, gram, "c")
    f = np.asarray(f, dtype=np.complex128)
    if f.ndim != 1 or f.shape[0] != family.dim:
        raise DimMismatch(f"f must have length {family.dim}, got shape {f.shape}")

    g_pinv_c = gram.G_pinv.entries @ c
    s_pinv = _frame_pinv(family, tol)
    s_pinv_f = s_pinv @ f
    condition = (gram.lambda_max / gram.lambda_min_retained
                 if gram.lambda_min_retained > 0 else math.inf)
    return TripletReport(
        norm_psi=math.sqrt(max(float(np.real(np.vdot(c, g_pinv_c))), 0.0)),
        norm_zero=float(np.linalg.norm(c)),
        norm_psi_cross=math.sqrt(max(float(np.real(np.vdot(c, gram.G.entries @ c))), 0.0)),
        norm_S_frak=float(np.linalg.norm(s_pinv_f)),
        norm_frak_coeff=float(np.linalg.norm(g_pinv_c)),
        norm_form_domain=math.sqrt(max(float(np.real(np.vdot(f, s_pinv_f))), 0.0)),
        embedding_condition=condition,
        retained_rank=gram.retained_rank,
        coefficients_in_range=gram.range_defect(c) <= RANGE_TOL,
    )


def duality_residual(psi: FamilyMatrix, phi: FamilyMatrix) -> float:
    """||D_Psi C_Phi - I||_2, the worst relative error of f = sum <phi_k, f> psi_k."""
    if psi.dim != phi.dim or psi.count != phi.count:
        raise DimMismatch(f"families differ in shape: {psi.columns.shape} vs {phi.columns.shape}")
    product = psi.columns @ phi.analysis_matrix
    return float(np.linalg.norm(product - np.eye(psi.dim), ord=2))


def is_dual_pair(psi: FamilyMatrix, phi: FamilyMatrix, tolerance: float = RECONSTRUCTION_TOL) -> bool:
    return duality_residual(psi, phi) <= tolerance


def dual_from_lower(phi: FamilyMatrix, tol: Optional[RankTolerance] = None) -> FamilyMatrix:
    """psi_k = V e_k with V = C_Phi^+ (C_Phi^-1 on its range, 0 on the complement)."""
    tol = resolve_tolerance(tol)
    if not _is_total(phi, tol):
        raise NotLowerSemiFrame(
            f"family {phi.label!r} is not total at d={phi.dim} (rank {phi.frame_spectral.rank(tol)})"
        )
    v = pseudo_inverse(phi.analysis_matrix, tol)
    return make_family(v, label=f"lower_dual({phi.label})")


def dual_bound_check(psi: FamilyMatrix, phi: FamilyMatrix, tol: Optional[RankTolerance] = None) -> DualityReport:
    """lambda_min(S_Phi) >= 1/M(Psi) for a dual Phi of an upper family Psi."""
    tol = resolve_tolerance(tol)
    upper = diagnostics(psi, tol).upper_bound
    residual = duality_residual(psi, phi)
    required = 1.0 / upper
    dual_lower = phi.frame_spectral.lambda_min
    return DualityReport(
        upper_bound=upper,
        required_lower_bound=required,
        dual_lower_bound=dual_lower,
        duality_residual=residual,
        precondition_met=residual <= RECONSTRUCTION_TOL,
        holds=dual_lower >= required - 1e-9,
    )


def regularity(family: FamilyMatrix, tol: Optional[RankTolerance] = None) -> RegularityReport:
    """Columns in the truncation-scale domain of S^-1: ||S S^+ psi_k - psi_k|| <= tol ||psi_k||."""
    tol = resolve_tolerance(tol)
    threshold = get_settings().numerics.regularity_tol
    spectral = family.frame_spectral
    s_pinv = spectral.pinv(tol).entries
    cols = family.columns
    norms = np.linalg.norm(cols, axis=0)
    residuals = np.linalg.norm(spectral.entries @ (s_pinv @ cols) - cols, axis=0) / norms
    # ||(S^+)^1/2 psi_k||^2 = <psi_k, S^+ psi_k>, the diagonal of the kernel
    form_norms = np.real(np.einsum("ik,ik->k", cols.conj(), s_pinv @ cols))
    rank = spectral.rank(tol)
    cutoff_active = rank < family.dim
    margin = spectral.min_retained(tol) / tol.threshold(max(spectral.lambda_max, 0.0))
    max_residual = float(np.max(residuals))
    return RegularityReport(
        regular=bool(max_residual <= threshold and not cutoff_active),
        max_residual=max_residual,
        column_residuals=[float(r) for r in residuals],
        retained_rank=rank,
        dim=family.dim,
        cutoff_active=cutoff_active,
        cutoff_margin=float(margin),
        form_domain_norms=[float(v) for v in form_norms],
        max_form_domain_norm=float(np.max(form_norms)),
    )


def commutation_residuals(family: FamilyMatrix, gram: Optional[GramOperators] = None,
                          tol: Optional[RankTolerance] = None) -> Dict[str, float]:
    """Relative residuals of C S^1/2 = G^1/2 C and D G^1/2 = S^1/2 D."""
    tol = resolve_tolerance(tol)
    gram = gram or gram_operators(family, tol)
    s_half = family.frame_spectral.sqrt(tol).entries
    c, d = family.analysis_matrix, family.columns
    g_half = gram.G_half.entries
    scale_c = float(np.max(np.abs(c)))
    return {
        "C_S_half": _relative(float(np.max(np.abs(c @ s_half - g_half @ c))), scale_c),
        "D_G_half": _relative(float(np.max(np.abs(d @ g_half - s_half @ d))), scale_c),
        "G_C_vs_C_S": _relative(float(np.max(np.abs(gram.G.entries @ c - c @ family.frame_spectral.entries))),
                                scale_c),
    }


def reconstruction_report(family: FamilyMatrix, f, tol: Optional[RankTolerance] = None) -> ReconstructionReport:
    """All reconstruction formulas on one vector, side by side."""
    tol = resolve_tolerance(tol)
    gram = gram_operators(family, tol)
    results = [
        reconstruct_frame(family, f, tol, ReconstructionFormula.SREPR),
        reconstruct_frame(family, f, tol, ReconstructionFormula.SREPR2),
        reconstruct_RD(family, f, gram, tol),
        reconstruct_full(family, f, gram, tol),
        reconstruct_from_coefficients(family, analysis(family, f), tol),
    ]
    return ReconstructionReport(
        label=family.label,
        total=_is_total(family, tol),
        regular=regularity(family, tol).regular,
        residuals=[r.as_residual() for r in results],
        sqrt_factorization_residual=sqrt_factorization_check(family, tol).residual,
        commutation_residuals=commutation_residuals(family, gram, tol),
    )
