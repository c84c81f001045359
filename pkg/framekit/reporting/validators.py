"""Validation functions for report files and CLI run configs"""
from typing import Any, Dict, List

from pydantic import ValidationError

from framekit.errors import InvalidInput
from framekit.reporting.envelope import SCHEMA, ReportEnvelope

PAYLOAD_KEYS = {
    "FrameDiagnostics": ["dim", "count", "lower_bound", "upper_bound", "rank_S", "total"],
    "SweepVerdict": ["points", "verdict"],
    "ReconstructionReport": ["residuals", "sqrt_factorization_residual", "regular"],
    "TripletReport": ["norm_psi", "norm_zero", "norm_psi_cross"],
    "DualityReport": ["duality_residual", "holds"],
    "FusionReport": ["lower_bound", "upper_bound", "rank_S", "total"],
}


def validate_envelope(data: Dict[str, Any]) -> ReportEnvelope:
    """Validate a parsed report: known schema, no unknown fields, payload keys present"""
    if not isinstance(data, dict):
        raise InvalidInput("report must be a JSON object")
    if data.get("schema") != SCHEMA:
        raise InvalidInput(f"unsupported report schema {data.get('schema')!r}, expected {SCHEMA!r}")
    try:
        envelope = ReportEnvelope.model_validate(data)
    except ValidationError as exc:
        raise InvalidInput(f"invalid report: {exc.errors()[0]['msg']}") from exc

    missing = validate_payload_keys(envelope.payload_type, envelope.payload)
    if missing:
        raise InvalidInput(f"{envelope.payload_type} payload is missing {missing}")
    return envelope


def validate_payload_keys(payload_type: str, payload: Dict[str, Any]) -> List[str]:
    """Return required payload keys that are absent"""
    return [key for key in PAYLOAD_KEYS.get(payload_type, []) if key not in payload]


def validate_dims(dims: Any) -> List[int]:
    """Accept '8,16,32' or a list of ints"""
    if isinstance(dims, str):
        parts = [p.strip() for p in dims.split(",") if p.strip()]
        try:
            dims = [int(p) for p in parts]
        except ValueError:
            raise InvalidInput(f"dims must be comma-separated integers, got {dims!r}") from None
    if not isinstance(dims, (list, tuple)) or not dims:
        raise InvalidInput("dims must be a non-empty list")
    out = []
    for d in dims:
        if isinstance(d, bool) or not isinstance(d, int):
            raise InvalidInput(f"dims must be integers, got {d!r}")
        out.append(d)
    return out
