"""
Dense Hermitian linear algebra: eigendecomposition, functions of an operator
and the truncated spectral pseudo-inverse.

Every inverse in framekit goes through a RankTolerance: eigenvalues with
|lambda| <= relative_cutoff * max|lambda| are treated as zero.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import get_settings
from framekit.errors import InvalidInput, SingularOperator

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, Sequence]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class RankTolerance:
    """Relative eigenvalue cutoff."""

    relative_cutoff: float = 1e-12

    def __post_init__(self):
        cutoff = float(self.relative_cutoff)
        if not np.isfinite(cutoff) or cutoff <= 0:
            raise InvalidInput(f"relative_cutoff must be > 0, got {self.relative_cutoff!r}")
        object.__setattr__(self, "relative_cutoff", cutoff)

    def threshold(self, scale: float) -> float:
        return self.relative_cutoff * scale

    @classmethod
    def default(cls) -> "RankTolerance":
        return get_settings().get_tolerance()


def resolve_tolerance(tol: Optional[Union["RankTolerance", float]]) -> RankTolerance:
    """Accept None (settings default), a float cutoff, or a RankTolerance."""
    if tol is None:
        return RankTolerance.default()
    if isinstance(tol, RankTolerance):
        return tol
    return RankTolerance(float(tol))


@dataclass(frozen=True)
class HermitianMatrix:
    """Square complex matrix, symmetrized at construction: A <- (A + A*)/2."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.complex128, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise InvalidInput(f"Hermitian matrix must be square and non-empty, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInput("Hermitian matrix has non-finite entries")
        a = 0.5 * (a + a.conj().T)
        object.__setattr__(self, "entries", _readonly(a))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.entries)))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted descending, unitary eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0
    converged: bool = True

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _readonly(np.asarray(self.eigenvalues, dtype=float)))
        object.__setattr__(self, "eigenvectors", _readonly(np.asarray(self.eigenvectors, dtype=np.complex128)))

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.eigenvalues))) if self.dim else 0.0

    def retained(self, tol: RankTolerance) -> np.ndarray:
        """Boolean mask of eigenvalues above the cutoff."""
        scale = self.scale
        if scale == 0.0:
            return np.zeros(self.dim, dtype=bool)
        return np.abs(self.eigenvalues) > tol.threshold(scale)

    def rank(self, tol: RankTolerance) -> int:
        return int(np.count_nonzero(self.retained(tol)))

    def recompose(self, values: Optional[np.ndarray] = None) -> np.ndarray:
        lam = self.eigenvalues if values is None else values
        u = self.eigenvectors
        return (u * lam) @ u.conj().T


@dataclass(frozen=True)
class OperatorFunction:
    """A real function applied to the spectrum.

    inverse_type functions map eigenvalues below the cutoff to 0.
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    inverse_type: bool = False

    def __call__(self, values: np.ndarray) -> np.ndarray:
        return self.func(values)


IDENTITY = OperatorFunction("identity", lambda x: np.array(x, dtype=float))
SQRT = OperatorFunction("sqrt", np.sqrt)
INVERSE = OperatorFunction("inverse", lambda x: 1.0 / x, inverse_type=True)
INVERSE_SQRT = OperatorFunction("inverse_sqrt", lambda x: 1.0 / np.sqrt(x), inverse_type=True)


# --- cyclic Jacobi ---------------------------------------------------------

@lru_cache(maxsize=64)
def _round_robin(n: int) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    """Parallel (tournament) ordering: each round is a set of disjoint pairs p < q."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                pairs.append((min(a, b), max(a, b)))
        if pairs:
            pairs.sort()
            p = np.array([pq[0] for pq in pairs], dtype=np.intp)
            q = np.array([pq[1] for pq in pairs], dtype=np.intp)
            rounds.append((_readonly(p), _readonly(q)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi(a: np.ndarray, max_sweeps: int, rel_tol: float):
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return np.real(np.diag(a)).copy(), v, 0, True

    target = rel_tol * scale
    pair_floor = target / n
    rounds = _round_robin(n)

    sweep = 0
    while True:
        if _off_norm(a) <= target:
            return np.real(np.diag(a)).copy(), v, sweep, True
        if sweep >= max_sweeps:
            return np.real(np.diag(a)).copy(), v, sweep, False
        for p_all, q_all in rounds:
            apq_all = a[p_all, q_all]
            active = np.abs(apq_all) > pair_floor
            if not np.any(active):
                continue
            p, q, apq = p_all[active], q_all[active], apq_all[active]
            mag = np.abs(apq)
            phase = apq / mag
            app = np.real(a[p, p])
            aqq = np.real(a[q, q])
            theta = (aqq - app) / (2.0 * mag)
            sign = np.where(theta >= 0.0, 1.0, -1.0)
            with np.errstate(over="ignore"):
                t = sign / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # unitary block [[u_pp, u_pq], [u_qp, u_qq]] = diag(1, e^{-i phi}) @ [[c, s], [-s, c]]
            u_pp = c.astype(np.complex128)
            u_pq = s.astype(np.complex128)
            u_qp = -s * np.conj(phase)
            u_qq = c * np.conj(phase)

            cp, cq = a[:, p], a[:, q]
            a[:, p] = cp * u_pp + cq * u_qp
            a[:, q] = cp * u_pq + cq * u_qq
            rp, rq = a[p, :], a[q, :]
            a[p, :] = np.conj(u_pp)[:, None] * rp + np.conj(u_qp)[:, None] * rq
            a[q, :] = np.conj(u_pq)[:, None] * rp + np.conj(u_qq)[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0

            vp, vq = v[:, p], v[:, q]
            v[:, p] = vp * u_pp + vq * u_qp
            v[:, q] = vp * u_pq + vq * u_qq
        a = 0.5 * (a + a.conj().T)
        sweep += 1


def _canonical_order(values: np.ndarray, vectors: np.ndarray):
    """Sort descending; ties ordered by index of the largest-magnitude component.

    Each eigenvector is phased so that its largest-magnitude component is real positive.
    """
    n = values.shape[0]
    lead = np.argmax(np.abs(vectors), axis=0)
    phases = vectors[lead, np.arange(n)]
    phases = np.where(np.abs(phases) > 0, phases / np.abs(phases), 1.0)
    vectors = vectors / phases[None, :]

    order = np.argsort(-values, kind="stable")
    scale = float(np.max(np.abs(values))) if n else 0.0
    tie = 1e-12 * max(scale, 1e-300)
    result = []
    i = 0
    while i < n:
        j = i + 1
        while j < n and values[order[i]] - values[order[j]] <= tie:
            j += 1
        group = sorted(order[i:j], key=lambda k: (lead[k], k))
        result.extend(group)
        i = j
    idx = np.array(result, dtype=np.intp)
    return values[idx], vectors[:, idx]


def eig(a: Union[HermitianMatrix, ArrayLike], backend: Optional[str] = None) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    The default backend is the cyclic Jacobi method (parallel ordering,
    deterministic); ``backend="lapack"`` delegates to numpy.linalg.eigh.
    """
    matrix = a if isinstance(a, HermitianMatrix) else HermitianMatrix(np.asarray(a))
    numerics = get_settings().numerics
    backend = backend or numerics.eig_backend

    if backend == "lapack":
        values, vectors = np.linalg.eigh(matrix.entries)
        sweeps, converged = 0, True
    elif backend == "jacobi":
        values, vectors, sweeps, converged = _jacobi(
            matrix.entries, numerics.jacobi_max_sweeps, numerics.jacobi_rel_tol
        )
        if not converged:
            logger.warning(
                "Jacobi did not reach off-diagonal tolerance after %d sweeps (dim=%d)",
                sweeps, matrix.dim,
            )
    else:
        raise InvalidInput(f"unknown eigensolver backend {backend!r}")

    values, vectors = _canonical_order(np.asarray(values, dtype=float), vectors)
    return EigenDecomposition(values, vectors, sweeps=sweeps, converged=converged)


@dataclass(frozen=True)
class SpectralOperator:
    """Hermitian operator with a cached eigendecomposition."""

    matrix: HermitianMatrix
    backend: Optional[str] = field(default=None, compare=False)

    @classmethod
    def from_array(cls, a: ArrayLike) -> "SpectralOperator":
        return cls(HermitianMatrix(np.asarray(a)))

    @cached_property
    def decomposition(self) -> EigenDecomposition:
        return eig(self.matrix, backend=self.backend)

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @property
    def entries(self) -> np.ndarray:
        return self.matrix.entries

    @property
    def lambda_max(self) -> float:
        return float(self.decomposition.eigenvalues[0])

    @property
    def lambda_min(self) -> float:
        return float(self.decomposition.eigenvalues[-1])

    def rank(self, tol: Optional[RankTolerance] = None) -> int:
        return self.decomposition.rank(resolve_tolerance(tol))

    def min_retained(self, tol: Optional[RankTolerance] = None) -> float:
        """Smallest eigenvalue above the cutoff (0.0 when nothing is retained)."""
        dec = self.decomposition
        mask = dec.retained(resolve_tolerance(tol))
        return float(np.min(dec.eigenvalues[mask])) if np.any(mask) else 0.0

    def function(self, f: Union[OperatorFunction, Callable], tol: Optional[RankTolerance] = None) -> HermitianMatrix:
        tol = resolve_tolerance(tol)
        fn = f if isinstance(f, OperatorFunction) else OperatorFunction(getattr(f, "__name__", "f"), f)
        dec = self.decomposition
        lam = dec.eigenvalues
        keep = dec.retained(tol)

        out = np.zeros_like(lam)
        with np.errstate(all="ignore"):
            if fn.inverse_type:
                out[keep] = fn(lam[keep])
            else:
                out = np.asarray(fn(lam), dtype=float)
                dropped_bad = ~keep & ~np.isfinite(out)
                out[dropped_bad] = 0.0
        bad = keep & ~np.isfinite(out)
        if np.any(bad):
            raise SingularOperator(
                f"{fn.name} undefined on retained eigenvalue(s) {lam[bad][:3].tolist()}"
            )
        return HermitianMatrix(dec.recompose(out))

    def pinv(self, tol: Optional[RankTolerance] = None) -> HermitianMatrix:
        return self.function(INVERSE, tol)

    def sqrt(self, tol: Optional[RankTolerance] = None) -> HermitianMatrix:
        return self.function(SQRT, tol)

    def inverse_sqrt(self, tol: Optional[RankTolerance] = None) -> HermitianMatrix:
        return self.function(INVERSE_SQRT, tol)

    def range_projector(self, tol: Optional[RankTolerance] = None) -> np.ndarray:
        """Orthogonal projector onto the span of retained eigenvectors."""
        dec = self.decomposition
        u = dec.eigenvectors[:, dec.retained(resolve_tolerance(tol))]
        return u @ u.conj().T


def apply_function(a: Union[HermitianMatrix, ArrayLike], f: Union[OperatorFunction, Callable],
                   tol: Optional[RankTolerance] = None) -> HermitianMatrix:
    """U f(Lambda) U*, re-symmetrized."""
    matrix = a if isinstance(a, HermitianMatrix) else HermitianMatrix(np.asarray(a))
    return SpectralOperator(matrix).function(f, tol)


def pseudo_inverse(m: ArrayLike, tol: Optional[RankTolerance] = None) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of a d x N matrix via the smaller Gram matrix."""
    m = np.array(m, dtype=np.complex128)
    if m.ndim != 2:
        raise InvalidInput(f"pseudo_inverse expects a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInput("pseudo_inverse input has non-finite entries")
    rows, cols = m.shape
    if rows == 0 or cols == 0 or not np.any(m):
        return np.zeros((cols, rows), dtype=np.complex128)
    mh = m.conj().T
    if cols <= rows:
        gram_pinv = SpectralOperator.from_array(mh @ m).pinv(tol).entries
        return gram_pinv @ mh
    gram_pinv = SpectralOperator.from_array(m @ mh).pinv(tol).entries
    return mh @ gram_pinv
