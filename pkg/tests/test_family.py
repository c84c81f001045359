import numpy as np
import pytest

from framekit.errors import InvalidFamily, InvalidInput
from framekit.frames.family import FamilyGenerator, TruncationSweep, explicit_generator, make_family, truncate
from framekit.models import GeneratorKind


def test_family_shape_and_readonly():
    fam = make_family(np.ones((3, 4)), label="f")
    assert (fam.dim, fam.count) == (3, 4)
    assert np.array_equal(fam.analysis_matrix, fam.columns.conj().T)
    with pytest.raises(ValueError):
        fam.columns[0, 0] = 2.0


def test_zero_column_rejected():
    with pytest.raises(InvalidFamily):
        make_family(np.array([[1.0, 0.0], [0.0, 0.0]]))


@pytest.mark.parametrize("bad", [np.ones(3), np.zeros((0, 2)), np.array([[np.inf, 1.0]])])
def test_malformed_family_rejected(bad):
    with pytest.raises(InvalidInput):
        make_family(bad)


def test_frame_operator_is_cached():
    fam = make_family(np.eye(2))
    assert fam.frame_spectral is fam.frame_spectral


def test_generator_checks_dimension():
    gen = FamilyGenerator(GeneratorKind.DIAGONAL_WEIGHTS, rule=lambda d: np.eye(d + 1), label="broken")
    with pytest.raises(InvalidInput):
        gen.produce(3)
    ok = FamilyGenerator(GeneratorKind.DIAGONAL_WEIGHTS, rule=np.eye, label="id")
    assert truncate(ok, 4).dim == 4
    with pytest.raises(InvalidInput):
        ok.produce(0)
    with pytest.raises(InvalidInput):
        ok.produce(2.5)


def test_explicit_generator_fixed_dim():
    fam = make_family(np.eye(3), label="id3")
    gen = explicit_generator(fam)
    assert np.array_equal(gen.produce(3).columns, fam.columns)
    assert not gen.coordinate_stable
    with pytest.raises(InvalidInput):
        gen.produce(4)


def test_truncation_sweep_validation():
    assert TruncationSweep((8, 16)).dims == (8, 16)
    for dims in [(), (0, 2), (4, 4), (8, 4)]:
        with pytest.raises(InvalidInput):
            TruncationSweep(dims)


def test_default_sweep_from_settings():
    assert TruncationSweep.default().dims == (8, 16, 32, 64, 128, 256)
