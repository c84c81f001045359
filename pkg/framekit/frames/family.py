"""
Vector families Psi = (psi_k) and the generators producing their truncations.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from config.settings import get_settings
from framekit.errors import InvalidFamily, InvalidInput
from framekit.linalg.spectral import SpectralOperator
from framekit.models import GeneratorKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FamilyMatrix:
    """d x N complex matrix whose column k is psi_k."""

    columns: np.ndarray
    label: str = ""
    flags: FrozenSet[str] = field(default_factory=frozenset)

    def __post_init__(self):
        a = np.array(self.columns, dtype=np.complex128, copy=True)
        if a.ndim != 2 or 0 in a.shape:
            raise InvalidInput(f"family columns must be a non-empty d x N matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInput(f"family {self.label!r} has non-finite entries")
        zero = ~np.any(a != 0, axis=0)
        if np.any(zero):
            raise InvalidFamily(
                f"family {self.label!r} has zero column(s) at {np.flatnonzero(zero)[:5].tolist()}"
            )
        a.setflags(write=False)
        object.__setattr__(self, "columns", a)
        object.__setattr__(self, "flags", frozenset(self.flags))

    @property
    def dim(self) -> int:
        return self.columns.shape[0]

    @property
    def count(self) -> int:
        return self.columns.shape[1]

    @property
    def analysis_matrix(self) -> np.ndarray:
        """C = D*, an N x d matrix."""
        return self.columns.conj().T

    def column(self, k: int) -> np.ndarray:
        return self.columns[:, k]

    @cached_property
    def frame_spectral(self) -> SpectralOperator:
        """S = sum psi_k psi_k* with cached spectrum."""
        return SpectralOperator.from_array(self.columns @ self.columns.conj().T)

    @cached_property
    def gram_spectral(self) -> SpectralOperator:
        """G = C D = (columns)*(columns) with cached spectrum."""
        return SpectralOperator.from_array(self.columns.conj().T @ self.columns)


def make_family(columns, label: str = "", flags: Iterable[str] = ()) -> FamilyMatrix:
    """Build a family; zero columns raise InvalidFamily, non-finite entries InvalidInput."""
    return FamilyMatrix(np.asarray(columns), label=label, flags=frozenset(flags))


@dataclass(frozen=True)
class FamilyGenerator:
    """A rule producing psi_k for any truncation dimension d."""

    kind: GeneratorKind
    rule: Callable[[int], np.ndarray] = field(compare=False)
    params: Mapping[str, Any] = field(default_factory=dict)
    label: str = ""
    coordinate_stable: bool = True
    min_dim: int = 1

    def produce(self, d: int) -> FamilyMatrix:
        if isinstance(d, bool) or int(d) != d or d < self.min_dim:
            raise InvalidInput(f"{self.kind.value} generator needs integer d >= {self.min_dim}, got {d!r}")
        d = int(d)
        family = make_family(self.rule(d), label=f"{self.label}[d={d}]")
        if family.dim != d:
            raise InvalidInput(f"{self.kind.value} generator produced dim {family.dim} for d={d}")
        return family


def explicit_generator(family: FamilyMatrix) -> FamilyGenerator:
    """Wrap a fixed family; only its own dimension can be produced."""

    def rule(d: int) -> np.ndarray:
        if d != family.dim:
            raise InvalidInput(f"explicit family {family.label!r} has fixed dim {family.dim}, requested {d}")
        return family.columns

    return FamilyGenerator(
        kind=GeneratorKind.EXPLICIT,
        rule=rule,
        params={"dim": family.dim, "count": family.count},
        label=family.label or "explicit",
        coordinate_stable=False,
    )


def truncate(generator: FamilyGenerator, d: int) -> FamilyMatrix:
    return generator.produce(d)


@dataclass(frozen=True)
class TruncationSweep:
    """Strictly increasing list of truncation dimensions."""

    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise InvalidInput("a truncation sweep needs at least one dimension")
        if any(d < 1 for d in dims):
            raise InvalidInput(f"sweep dimensions must be positive, got {dims}")
        if any(b <= a for a, b in zip(dims, dims[1:])):
            raise InvalidInput(f"sweep dimensions must be strictly increasing, got {dims}")
        object.__setattr__(self, "dims", dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    @classmethod
    def default(cls) -> "TruncationSweep":
        return cls(tuple(get_settings().sweep.default_dims))

    @classmethod
    def coerce(cls, dims: Optional[Sequence[int]]) -> "TruncationSweep":
        if dims is None:
            return cls.default()
        if isinstance(dims, TruncationSweep):
            return dims
        return cls(tuple(dims))
