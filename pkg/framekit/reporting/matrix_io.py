"""
CSV storage of complex matrices.

    # dim=<d> count=<N> field=complex
    re+imj,re+imj,...        one row per coordinate

Entries are written with 17 significant digits so a write/read round trip is
bitwise stable.
"""
import csv
import logging
import re
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import numpy as np

from framekit.errors import InvalidInput
from framekit.frames.family import FamilyMatrix, make_family

logger = logging.getLogger(__name__)

_HEADER = re.compile(r"^#\s*dim=(\d+)\s+count=(\d+)\s+field=complex\s*$")

PathLike = Union[str, Path]


def format_entry(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}j"


def parse_entry(text: str) -> complex:
    token = text.strip().replace(" ", "")
    try:
        return complex(token)
    except ValueError:
        raise InvalidInput(f"cannot parse complex entry {text!r}") from None


def write_matrix(path: PathLike, matrix) -> Path:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2:
        raise InvalidInput(f"only 2-D matrices can be written, got shape {m.shape}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        handle.write(f"# dim={m.shape[0]} count={m.shape[1]} field=complex\n")
        writer = csv.writer(handle, lineterminator="\n")
        for row in m:
            writer.writerow(format_entry(z) for z in row)
    logger.debug("wrote %dx%d matrix to %s", m.shape[0], m.shape[1], path)
    return path


def _rows(lines: Iterable[str]) -> List[List[str]]:
    return [row for row in csv.reader(lines) if row and any(cell.strip() for cell in row)]


def read_matrix(path: PathLike) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise InvalidInput(f"matrix file not found: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise InvalidInput(f"matrix file {path} is empty")
    header = _HEADER.match(lines[0].strip())
    if header is None:
        raise InvalidInput(f"{path}: first line must be '# dim=<d> count=<N> field=complex'")
    dim, count = int(header.group(1)), int(header.group(2))
    rows = _rows(lines[1:])
    if len(rows) != dim or any(len(r) != count for r in rows):
        raise InvalidInput(f"{path}: expected {dim} rows of {count} entries")
    return np.array([[parse_entry(cell) for cell in row] for row in rows], dtype=np.complex128)


def write_family(path: PathLike, family: FamilyMatrix) -> Path:
    return write_matrix(path, family.columns)


def read_family(path: PathLike, label: str = "") -> FamilyMatrix:
    return make_family(read_matrix(path), label=label or Path(path).stem)


def read_vector(path: PathLike, length: int) -> np.ndarray:
    """A d x 1 matrix file, or a plain list of complex entries."""
    path = Path(path)
    if not path.is_file():
        raise InvalidInput(f"vector file not found: {path}")
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("#"):
        vector = read_matrix(path).reshape(-1)
    else:
        cells = [c for row in _rows(text.splitlines()) for c in row]
        vector = np.array([parse_entry(c) for c in cells], dtype=np.complex128)
    if vector.shape[0] != length:
        raise InvalidInput(f"{path}: vector has {vector.shape[0]} entries, expected {length}")
    return vector


def write_blocks(directory: PathLike, bases: Sequence[np.ndarray], stem: str = "subspace") -> List[Path]:
    """One CSV file per subspace basis."""
    directory = Path(directory)
    return [write_matrix(directory / f"{stem}_{j}.csv", b) for j, b in enumerate(bases)]
