"""
Versioned JSON report envelope.

Floats are written with 17 significant digits; non-finite values become the
strings "inf", "-inf" and "nan".
"""
import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config.settings import get_settings

logger = logging.getLogger(__name__)

SCHEMA = "framekit/1"


class ReportEnvelope(BaseModel):
    """Tool version, config echo, timing and exactly one payload."""

    model_config = ConfigDict(extra="forbid")

    schema_id: str = Field(SCHEMA, alias="schema")
    tool: str = "framekit"
    version: str
    command: str
    config: Dict[str, Any] = {}
    timing: Dict[str, Any] = {}
    payload_type: str
    payload: Dict[str, Any]
    exit_code: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True)


def _plain(value: Any) -> Any:
    """Reduce models, enums, numpy scalars and arrays to JSON-ready python values."""
    if isinstance(value, BaseModel):
        return _plain(value.model_dump())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, Path):
        return str(value)
    return value


def format_float(value: float, digits: int = 17) -> str:
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    return format(value, f".{digits}g")


def dumps(data: Any, digits: Optional[int] = None, indent: int = 2) -> str:
    """json.dumps with every float rendered at `digits` significant digits."""
    if digits is None:
        digits = get_settings().app.float_digits
    floats = []

    def mark(value):
        if isinstance(value, dict):
            return {k: mark(v) for k, v in value.items()}
        if isinstance(value, list):
            return [mark(v) for v in value]
        if isinstance(value, float):
            floats.append(value)
            return f"\x00F{len(floats) - 1}\x00"
        return value

    text = json.dumps(mark(_plain(data)), indent=indent)
    for i, value in enumerate(floats):
        text = text.replace(f'"\\u0000F{i}\\u0000"', format_float(value, digits), 1)
    return text


def build_envelope(command: str, payload: Union[BaseModel, Dict[str, Any]], config: Optional[Dict[str, Any]] = None,
                   timing: Optional[Dict[str, Any]] = None, exit_code: int = 0) -> ReportEnvelope:
    payload_type = type(payload).__name__ if isinstance(payload, BaseModel) else "dict"
    return ReportEnvelope(
        version=get_settings().app.app_version,
        command=command,
        config=_plain(config or {}),
        timing=_plain(timing or {}),
        payload_type=payload_type,
        payload=_plain(payload),
        exit_code=exit_code,
    )


def write_envelope(path: Union[str, Path], envelope: ReportEnvelope) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(envelope.to_dict()) + "\n", encoding="utf-8")
    logger.info("report written to %s", path)
    return path


def load_envelope(path: Union[str, Path]) -> Dict[str, Any]:
    """Parse a report; "inf"/"nan" strings stay strings."""
    return json.loads(Path(path).read_text(encoding="utf-8"))
