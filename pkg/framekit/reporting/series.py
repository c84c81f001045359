"""
Plot-ready CSV series: one row per truncation dimension.
"""
import csv
from pathlib import Path
from typing import Dict, List, Sequence, Union

from framekit.models import SweepVerdict

SWEEP_COLUMNS = ["d", "lower_bound", "upper_bound", "condition", "rank_S", "total"]
TRIPLET_COLUMNS = ["d", "lower_bound", "upper_bound", "norm_psi", "norm_zero", "norm_psi_cross",
                   "norm_S_frak", "norm_frak_coeff", "norm_form_domain"]


def _cell(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_series(path: Union[str, Path], columns: Sequence[str], rows: Sequence[Dict],
                 comments: Sequence[str] = ()) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        for line in comments:
            handle.write(f"# {line}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(_cell(row[c]) for c in columns)
    return path


def sweep_rows(verdict: SweepVerdict) -> List[Dict]:
    return [p.model_dump() for p in verdict.points]


def write_sweep_series(path: Union[str, Path], verdict: SweepVerdict) -> Path:
    """(d, m(d), M(d), condition, rank, total) with the fitted exponents as comments."""
    comments = [
        f"label={verdict.label}",
        f"alpha={_cell(verdict.alpha) if verdict.alpha is not None else 'none'}",
        f"beta={_cell(verdict.beta) if verdict.beta is not None else 'none'}",
        f"verdict={verdict.verdict.value}",
    ]
    return write_series(path, SWEEP_COLUMNS, sweep_rows(verdict), comments)


def read_series(path: Union[str, Path]) -> List[Dict[str, str]]:
    """Rows of a series file as strings keyed by column, comments skipped."""
    lines = [line for line in Path(path).read_text(encoding="utf-8").splitlines() if not line.startswith("#")]
    return list(csv.DictReader(lines))
