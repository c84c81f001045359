import numpy as np
import pytest

from framekit.errors import DimMismatch, InvalidInput
from framekit.examples.diagonal import diagonal_generator
from framekit.examples.multiplier import multiplier_generator
from framekit.frames.family import FamilyGenerator, make_family
from framekit.frames.frame_ops import (
    analysis,
    classify_sweep,
    decide_verdict,
    diagnostics,
    frame_operator,
    single_verdict,
    synthesis,
)
from framekit.models import GeneratorKind, Verdict
from tests.conftest import random_complex, random_total_family


def test_analysis_is_conjugate_linear(rng):
    fam = random_total_family(rng, d=4, count=6)
    f = random_complex(rng, 4)
    assert np.allclose(analysis(fam, f), fam.columns.conj().T @ f)
    assert np.allclose(analysis(fam, 1j * f), 1j * analysis(fam, f))


def test_analysis_synthesis_adjoint(rng):
    fam = random_total_family(rng, d=5, count=7)
    f, c = random_complex(rng, 5), random_complex(rng, 7)
    assert np.vdot(analysis(fam, f), c) == pytest.approx(np.vdot(f, synthesis(fam, c)))


def test_dimension_mismatch():
    fam = make_family(np.eye(3))
    with pytest.raises(DimMismatch):
        analysis(fam, np.ones(4))
    with pytest.raises(DimMismatch):
        synthesis(fam, np.ones(2))


def test_frame_operator_accumulation(rng):
    fam = random_total_family(rng, d=4, count=5)
    expected = sum(np.outer(fam.column(k), fam.column(k).conj()) for k in range(fam.count))
    assert np.allclose(frame_operator(fam).entries, expected)


def test_diagnostics_upper_family(upper_family):
    diag = diagnostics(upper_family)
    assert diag.upper_bound == pytest.approx(1.0, abs=1e-12)
    assert diag.lower_bound == pytest.approx(1.0 / 64, rel=1e-12)
    assert diag.total and diag.rank_S == 8
    assert diag.condition == pytest.approx(64.0)


def test_diagnostics_not_total():
    diag = diagnostics(make_family(np.array([[1.0, 1.0], [0.0, 0.0]])))
    assert not diag.total
    assert diag.lower_bound == 0.0
    assert diag.upper_bound == pytest.approx(2.0)
    assert diag.condition == float("inf")
    assert single_verdict(diag) is Verdict.NEITHER


def test_bounds_satisfy_frame_inequality(rng):
    fam = random_total_family(rng, d=5, count=8)
    diag = diagnostics(fam)
    for _ in range(200):
        f = random_complex(rng, 5)
        energy = np.sum(np.abs(analysis(fam, f)) ** 2)
        norm2 = np.vdot(f, f).real
        assert diag.lower_bound * norm2 <= energy * (1 + 1e-10)
        assert energy <= diag.upper_bound * norm2 * (1 + 1e-10)


def test_single_truncation_total_is_frame(rng):
    assert single_verdict(diagnostics(random_total_family(rng, d=3, count=3))) is Verdict.FRAME


def test_sweep_upper_semi_frame():
    verdict = classify_sweep(diagonal_generator("pow:-1"), (8, 16, 32, 64, 128, 256))
    assert verdict.verdict is Verdict.UPPER_SEMI_FRAME
    assert verdict.alpha == pytest.approx(-2.0, abs=1e-9)
    assert verdict.beta == pytest.approx(0.0, abs=1e-9)
    for point in verdict.points:
        assert point.upper_bound == pytest.approx(1.0, abs=1e-12)
        assert point.lower_bound == pytest.approx(1.0 / point.d ** 2, rel=1e-12)


def test_sweep_lower_semi_frame():
    verdict = classify_sweep(diagonal_generator("pow:1"), (8, 16, 32, 64))
    assert verdict.verdict is Verdict.LOWER_SEMI_FRAME


def test_sweep_frame():
    verdict = classify_sweep(multiplier_generator("const:1"), (8, 16, 32))
    assert verdict.verdict is Verdict.FRAME


def test_sweep_parallel_matches_serial():
    gen = multiplier_generator("pow:2")
    serial = classify_sweep(gen, (8, 16, 32), workers=1)
    parallel = classify_sweep(gen, (8, 16, 32), workers=3)
    assert serial.points == parallel.points
    assert parallel.verdict is Verdict.LOWER_SEMI_FRAME


def test_sweep_never_total_is_neither():
    def rule(d):
        cols = np.zeros((d, 1))
        cols[0, 0] = 1.0
        return cols

    gen = FamilyGenerator(GeneratorKind.EXPLICIT, rule=rule, label="single")
    verdict = classify_sweep(gen, (4, 8, 16))
    assert verdict.verdict is Verdict.NEITHER
    assert verdict.alpha is None


def test_sweep_needs_three_dims():
    with pytest.raises(InvalidInput):
        classify_sweep(diagonal_generator("pow:-1"), (8, 16))


@pytest.mark.parametrize(
    "alpha, beta, expected",
    [
        (0.0, 0.0, Verdict.FRAME),
        (-2.0, 0.0, Verdict.UPPER_SEMI_FRAME),
        (0.0, 2.0, Verdict.LOWER_SEMI_FRAME),
        (-1.0, 1.0, Verdict.NEITHER),
        (-0.3, 0.0, Verdict.INCONCLUSIVE),
    ],
)
def test_decide_verdict(alpha, beta, expected):
    assert decide_verdict(alpha, beta, True, True, 0.1, 0.5) is expected


def test_partially_total_sweep_is_inconclusive():
    assert decide_verdict(None, 0.0, False, True, 0.1, 0.5) is Verdict.INCONCLUSIVE
