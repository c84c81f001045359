"""
Fourier-multiplier model of the spherical wavelet frame operator, one coordinate
per degree l (the 2l+1 order multiplicity is dropped).
"""
from dataclasses import dataclass
from typing import Union

import numpy as np

from framekit.errors import InvalidInput
from framekit.examples.weights import WeightRule, as_rule
from framekit.frames.family import FamilyGenerator, FamilyMatrix, make_family
from framekit.models import GeneratorKind


@dataclass(frozen=True)
class MultiplierModel:
    """Symbol s(l) > 0 for l = 0..d-1, evaluated as rule(l + 1)."""

    symbol: WeightRule
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity != 1:
            raise InvalidInput("only multiplicity 1 is supported")

    @classmethod
    def parse(cls, text: str) -> "MultiplierModel":
        return cls(as_rule(text))

    def symbol_values(self, d: int) -> np.ndarray:
        return self.symbol.values(d)


def _model(model: Union[MultiplierModel, str]) -> MultiplierModel:
    return model if isinstance(model, MultiplierModel) else MultiplierModel.parse(model)


def gen_multiplier(model: Union[MultiplierModel, str], d: int) -> FamilyMatrix:
    """Columns sqrt(s(l)) e_l, so S = diag(s(0), ..., s(d-1))."""
    if d < 1:
        raise InvalidInput(f"multiplier family needs d >= 1, got {d}")
    model = _model(model)
    columns = np.diag(np.sqrt(model.symbol_values(d))).astype(np.complex128)
    return make_family(columns, label=f"multiplier({model.symbol.text})")


def multiplier_generator(model: Union[MultiplierModel, str]) -> FamilyGenerator:
    model = _model(model)
    return FamilyGenerator(
        kind=GeneratorKind.MULTIPLIER_MODEL,
        rule=lambda d: gen_multiplier(model, d).columns,
        params={"symbol": model.symbol.text},
        label=f"multiplier({model.symbol.text})",
    )
