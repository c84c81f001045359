"""
Data models for frame diagnostics and reports using Pydantic.
"""
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, field_validator, model_validator


class Verdict(str, Enum):
    """Classification of a family across a truncation sweep."""
    FRAME = "frame"
    UPPER_SEMI_FRAME = "upper_semi_frame"
    LOWER_SEMI_FRAME = "lower_semi_frame"
    NEITHER = "neither"
    INCONCLUSIVE = "inconclusive"


class GeneratorKind(str, Enum):
    """Rules producing truncations of an infinite family."""
    DIAGONAL_WEIGHTS = "diagonal_weights"
    AFFINE_CS = "affine_cs"
    MULTIPLIER_MODEL = "multiplier_model"
    EXPLICIT = "explicit"


class ReconstructionFormula(str, Enum):
    """The reconstruction formulas available for a family."""
    SREPR = "srepr"              # f = sum <psi_k, f> S^-1 psi_k
    SREPR2 = "srepr2"            # f = sum <S^-1 psi_k, f> psi_k
    RD = "rd"                    # f = sum [G^-1 (<psi_k, f>)] psi_k
    FULL = "full"                # f = S^-1/2 sum [G^-1/2 <psi_k, f>] psi_k
    COEFFICIENTS = "coefficients"  # f' = sum F_k S^-1 psi_k, F = C f'


class FrameDiagnostics(BaseModel):
    """Sharp frame bounds of one truncation."""
    label: str = ""
    dim: int
    count: int
    lower_bound: float
    upper_bound: float
    rank_S: int
    total: bool
    bessel: bool = True
    condition: float
    cutoff: float

    @field_validator("lower_bound")
    @classmethod
    def validate_lower(cls, v):
        if v < 0:
            raise ValueError("lower bound must be >= 0")
        return v

    @model_validator(mode="after")
    def validate_order(self):
        if self.lower_bound > self.upper_bound:
            raise ValueError("lower bound exceeds upper bound")
        return self


class SweepPoint(BaseModel):
    """Bounds at a single truncation dimension."""
    d: int
    lower_bound: float
    upper_bound: float
    rank_S: int
    total: bool
    condition: float


class SweepVerdict(BaseModel):
    """Semi-frame classification from the trend of m(d), M(d)."""
    label: str = ""
    points: List[SweepPoint]
    alpha: Optional[float] = None  # exponent of m(d)
    beta: Optional[float] = None   # exponent of M(d)
    verdict: Verdict
    bounded_exponent: float
    unbounded_exponent: float
    criterion: str = "log-log least-squares exponent fit of m(d), M(d)"

    @property
    def dims(self) -> List[int]:
        return [p.d for p in self.points]


class TripletReport(BaseModel):
    """Norms of the coefficient triplet H_Psi < H_0 < H_Psi^x and of the H side."""
    norm_psi: float
    norm_zero: float
    norm_psi_cross: float
    norm_S_frak: float
    norm_frak_coeff: float
    norm_form_domain: float
    embedding_condition: float
    retained_rank: int
    coefficients_in_range: bool


class ReconstructionResidual(BaseModel):
    """Relative residual of one reconstruction formula."""
    formula: ReconstructionFormula
    residual: float
    projected: bool = False


class ReconstructionReport(BaseModel):
    """Residual table of all reconstruction formulas on one vector."""
    label: str = ""
    total: bool
    regular: bool
    residuals: List[ReconstructionResidual]
    sqrt_factorization_residual: float
    commutation_residuals: Dict[str, float] = {}

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.residuals), default=0.0)


class RegularityReport(BaseModel):
    """Truncation-scale proxy for psi_k in Dom(S^-1)."""
    regular: bool
    max_residual: float
    column_residuals: List[float]
    retained_rank: int
    dim: int
    cutoff_active: bool
    cutoff_margin: float  # smallest retained eigenvalue over the cutoff
    form_domain_norms: List[float]  # ||(S^+)^1/2 psi_k||^2
    max_form_domain_norm: float


class SqrtFactorizationReport(BaseModel):
    """||S^1/2 - D G^-1/2 C||_max / ||S^1/2||_max."""
    residual: float
    passed: bool


class DualityReport(BaseModel):
    """Lower bound of a dual family against 1/M of the upper family."""
    upper_bound: float
    required_lower_bound: float
    dual_lower_bound: float
    duality_residual: float
    precondition_met: bool
    holds: bool


class FusionReport(BaseModel):
    """Bounds and residuals of a frame of subspaces."""
    dim: int
    subspaces: int
    weights: List[float]
    lower_bound: float
    upper_bound: float
    rank_S: int
    total: bool
    duality_residual: Optional[float] = None
    reconstruction_residual: Optional[float] = None
    max_dual_of_dual_angle: Optional[float] = None


class BoundTransferReport(BaseModel):
    """Weighted-family bounds transferred to block spans."""
    block_lower: List[float]
    block_upper: List[float]
    A: float
    B: float
    weighted_lower: float
    weighted_upper: float
    transferred_lower: float
    transferred_upper: float
    fusion_lower: float
    fusion_upper: float
    holds: bool

    @field_validator("A")
    @classmethod
    def validate_A(cls, v):
        if not v > 0:
            raise ValueError("every block must be a frame for its span (A > 0)")
        return v
