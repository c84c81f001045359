import json
import math

import numpy as np
import pytest

from framekit.errors import InvalidInput
from framekit.frames.frame_ops import classify_sweep, diagnostics
from framekit.examples.diagonal import diagonal_generator
from framekit.models import FrameDiagnostics
from framekit.reporting.envelope import SCHEMA, build_envelope, dumps, format_float, load_envelope, write_envelope
from framekit.reporting.matrix_io import (
    format_entry,
    parse_entry,
    read_family,
    read_matrix,
    read_vector,
    write_blocks,
    write_family,
    write_matrix,
)
from framekit.reporting.series import read_series, write_sweep_series
from framekit.reporting.validators import validate_dims, validate_envelope, validate_payload_keys
from tests.conftest import random_complex, random_total_family


class TestMatrixIO:
    def test_entry_format(self):
        assert format_entry(1 - 2j) == "1-2j"
        assert parse_entry(" 0.5+0.25j ") == 0.5 + 0.25j
        with pytest.raises(InvalidInput):
            parse_entry("abc")

    def test_round_trip_is_bitwise(self, tmp_path, rng):
        m = random_complex(rng, 4, 7)
        path = write_matrix(tmp_path / "m.csv", m)
        assert path.read_text().splitlines()[0] == "# dim=4 count=7 field=complex"
        assert np.array_equal(read_matrix(path), m)

    def test_family_round_trip_keeps_diagnostics(self, tmp_path, rng):
        fam = random_total_family(rng, d=5, count=8)
        loaded = read_family(write_family(tmp_path / "fam.csv", fam))
        assert loaded.label == "fam"
        assert diagnostics(loaded).model_dump(exclude={"label"}) == diagnostics(fam).model_dump(exclude={"label"})

    @pytest.mark.parametrize(
        "text",
        ["1,2\n", "# dim=2 count=2 field=complex\n1,2\n", "# dim=1 count=2 field=complex\n1,x\n"],
    )
    def test_malformed_files(self, tmp_path, text):
        path = tmp_path / "bad.csv"
        path.write_text(text)
        with pytest.raises(InvalidInput):
            read_matrix(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidInput):
            read_matrix(tmp_path / "absent.csv")

    def test_read_vector_plain_and_matrix(self, tmp_path):
        plain = tmp_path / "v.txt"
        plain.write_text("1, 2+1j\n3\n")
        assert np.array_equal(read_vector(plain, 3), [1, 2 + 1j, 3])
        column = write_matrix(tmp_path / "v.csv", np.array([[1.0], [2.0]]))
        assert np.array_equal(read_vector(column, 2), [1.0, 2.0])
        with pytest.raises(InvalidInput):
            read_vector(plain, 4)

    def test_write_blocks(self, tmp_path):
        paths = write_blocks(tmp_path, [np.eye(3)[:, :1], np.eye(3)[:, 1:]])
        assert [p.name for p in paths] == ["subspace_0.csv", "subspace_1.csv"]
        assert read_matrix(paths[1]).shape == (3, 2)


class TestEnvelope:
    def test_float_formatting(self):
        assert format_float(float("inf")) == '"inf"'
        assert format_float(float("-inf")) == '"-inf"'
        assert format_float(float("nan")) == '"nan"'
        assert format_float(0.1) == "0.10000000000000001"

    def test_dumps_keeps_full_precision(self):
        value = 1.0 / 3.0
        parsed = json.loads(dumps({"x": value, "y": [math.inf], "n": 3}))
        assert parsed["x"] == value
        assert parsed["y"] == ["inf"]
        assert parsed["n"] == 3

    def test_build_and_load(self, tmp_path):
        diag = FrameDiagnostics(dim=2, count=2, lower_bound=1.0, upper_bound=1.0, rank_S=2,
                                total=True, condition=1.0, cutoff=1e-12)
        envelope = build_envelope("classify", diag, config={"d": 2}, timing={"total_seconds": 0.5})
        data = envelope.to_dict()
        assert data["schema"] == SCHEMA
        assert data["payload_type"] == "FrameDiagnostics"
        loaded = load_envelope(write_envelope(tmp_path / "report.json", envelope))
        assert validate_envelope(loaded).payload["rank_S"] == 2

    def test_validate_rejects_wrong_schema_and_missing_keys(self):
        with pytest.raises(InvalidInput):
            validate_envelope({"schema": "other/1"})
        data = build_envelope("dual", {"holds": True}).to_dict()
        data["payload_type"] = "DualityReport"
        with pytest.raises(InvalidInput):
            validate_envelope(data)
        data["surprise"] = 1
        with pytest.raises(InvalidInput):
            validate_envelope(data)

    def test_payload_keys(self):
        assert validate_payload_keys("TripletReport", {"norm_psi": 1.0}) == ["norm_zero", "norm_psi_cross"]
        assert validate_payload_keys("Unknown", {}) == []


def test_validate_dims():
    assert validate_dims("8, 16,32") == [8, 16, 32]
    assert validate_dims([4, 8]) == [4, 8]
    for bad in ["8,x", "", [], [1.5], [True]]:
        with pytest.raises(InvalidInput):
            validate_dims(bad)


def test_sweep_series(tmp_path):
    verdict = classify_sweep(diagonal_generator("pow:-1"), (8, 16, 32))
    path = write_sweep_series(tmp_path / "sweep.csv", verdict)
    text = path.read_text()
    assert "# verdict=upper_semi_frame" in text
    rows = read_series(path)
    assert [int(r["d"]) for r in rows] == [8, 16, 32]
    assert float(rows[0]["lower_bound"]) == verdict.points[0].lower_bound
    assert rows[0]["total"] == "1"
