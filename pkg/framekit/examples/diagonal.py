"""
Diagonal weighted sequences (m_k e_k): psi_k = e_k / k is an upper semi-frame,
phi_k = k e_k its lower semi-frame dual.
"""
from typing import Union

import numpy as np

from framekit.errors import InvalidInput
from framekit.examples.weights import DiagonalWeights, parse_weight_rule
from framekit.frames.family import FamilyGenerator, FamilyMatrix, make_family
from framekit.models import GeneratorKind


def _weights(w: Union[DiagonalWeights, str]) -> DiagonalWeights:
    return w if isinstance(w, DiagonalWeights) else DiagonalWeights(parse_weight_rule(w))


def gen_diagonal(w: Union[DiagonalWeights, str], d: int) -> FamilyMatrix:
    """Columns m_k e_k, k = 1..d; the frame operator is diag(m_k^2)."""
    if d < 1:
        raise InvalidInput(f"diagonal family needs d >= 1, got {d}")
    w = _weights(w)
    return make_family(np.diag(w.values(d)).astype(np.complex128), label=f"diag({w.rule.text})")


def diagonal_generator(w: Union[DiagonalWeights, str]) -> FamilyGenerator:
    w = _weights(w)
    return FamilyGenerator(
        kind=GeneratorKind.DIAGONAL_WEIGHTS,
        rule=lambda d: gen_diagonal(w, d).columns,
        params=w.params,
        label=f"diag({w.rule.text})",
    )
