"""
Weight and symbol rules.

    pow:<p>                  k^p
    const:<v>                v
    list:<path>              values read from a text file (comma or whitespace separated)
    uniform:<lo>,<hi>[,<s>]  seeded uniform draws; a longer truncation extends a shorter one

Indices start at k = 1.
"""
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Tuple

import numpy as np

from framekit.errors import InvalidInput


_RULE = re.compile(r"^\s*(pow|const|list|uniform)\s*:\s*(.+?)\s*$")


def _float(text: str, rule: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise InvalidInput(f"weight rule {rule!r}: {text!r} is not a number") from None
    if not np.isfinite(value):
        raise InvalidInput(f"weight rule {rule!r}: value must be finite")
    return value


def _read_list(path: str) -> np.ndarray:
    file = Path(path)
    if not file.is_file():
        raise InvalidInput(f"weight list file not found: {path}")
    tokens = [t for t in re.split(r"[,\s]+", file.read_text(encoding="utf-8")) if t]
    if not tokens:
        raise InvalidInput(f"weight list file {path} is empty")
    return np.array([_float(t, f"list:{path}") for t in tokens], dtype=float)


@dataclass(frozen=True)
class WeightRule:
    """Parsed rule k -> m_k for k = 1..d."""

    text: str
    kind: str
    evaluate: Callable[[int], np.ndarray] = field(compare=False, repr=False)

    def values(self, d: int) -> np.ndarray:
        if d < 1:
            raise InvalidInput(f"weight rule needs d >= 1, got {d}")
        values = np.asarray(self.evaluate(d), dtype=float)
        if values.shape != (d,):
            raise InvalidInput(f"weight rule {self.text!r} produced shape {values.shape} for d={d}")
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise InvalidInput(f"weight rule {self.text!r} produced non-positive or non-finite weights")
        return values

    def __call__(self, d: int) -> np.ndarray:
        return self.values(d)


def parse_weight_rule(text: str) -> WeightRule:
    """Parse `pow:<p>`, `const:<v>`, `list:<path>` or `uniform:<lo>,<hi>[,<seed>]`."""
    match = _RULE.match(text or "")
    if not match:
        raise InvalidInput(f"unknown weight rule {text!r}; expected pow:, const:, list: or uniform:")
    kind, arg = match.groups()

    if kind == "pow":
        p = _float(arg, text)
        return WeightRule(text, kind, lambda d: np.arange(1, d + 1, dtype=float) ** p)

    if kind == "const":
        v = _float(arg, text)
        if v <= 0:
            raise InvalidInput(f"weight rule {text!r}: constant must be > 0")
        return WeightRule(text, kind, lambda d: np.full(d, v))

    if kind == "list":
        table = _read_list(arg)

        def from_list(d: int) -> np.ndarray:
            if d > table.shape[0]:
                raise InvalidInput(f"weight list {arg} has {table.shape[0]} entries, d={d} requested")
            return table[:d]

        return WeightRule(text, kind, from_list)

    parts = [p for p in arg.split(",") if p.strip()]
    if len(parts) not in (2, 3):
        raise InvalidInput(f"weight rule {text!r}: expected uniform:<lo>,<hi>[,<seed>]")
    lo, hi = _float(parts[0], text), _float(parts[1], text)
    seed: Optional[int] = int(_float(parts[2], text)) if len(parts) == 3 else 0
    if not 0 < lo <= hi:
        raise InvalidInput(f"weight rule {text!r}: need 0 < lo <= hi")
    return WeightRule(text, kind, lambda d: np.random.default_rng(seed).uniform(lo, hi, size=d))


def as_rule(rule) -> WeightRule:
    return rule if isinstance(rule, WeightRule) else parse_weight_rule(str(rule))


@dataclass(frozen=True)
class DiagonalWeights:
    """Weights m_k > 0 of the family (m_k e_k)."""

    rule: WeightRule

    @classmethod
    def parse(cls, text: str) -> "DiagonalWeights":
        return cls(parse_weight_rule(text))

    def values(self, d: int) -> np.ndarray:
        return self.rule.values(d)

    @property
    def params(self) -> dict:
        return {"weights": self.rule.text}


def explicit_weights(values: Tuple[float, ...]) -> DiagonalWeights:
    """Weights from an in-memory table."""
    table = np.asarray(values, dtype=float)

    def from_table(d: int) -> np.ndarray:
        if d > table.shape[0]:
            raise InvalidInput(f"weight table has {table.shape[0]} entries, d={d} requested")
        return table[:d]

    return DiagonalWeights(WeightRule(f"table[{table.shape[0]}]", "list", from_table))
