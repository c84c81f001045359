"""
Discretized affine coherent states psi_x(r) = e^{-ixr} psi(r) on H_n.

Ambient coordinates are quadrature-weighted samples u_i = f(r_i) sqrt(w_i r_i^mu),
so the Euclidean inner product is the quadrature of <f, g>. Columns carry
sqrt(dx) so that sum_k dx |psi_{x_k}><psi_{x_k}| approximates the integral over x
and S tends to multiplication by 2 pi r^mu |psi(r)|^2.
"""
import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import get_settings
from framekit.errors import InvalidInput
from framekit.frames.family import FamilyGenerator, FamilyMatrix, make_family
from framekit.models import GeneratorKind

logger = logging.getLogger(__name__)

ADMISSIBILITY_TOL = 1e-6


def default_mother(n: int, r_first: float) -> Callable[[np.ndarray], np.ndarray]:
    """psi(r)^2 = N r^{1-n} e^{-r}, N putting the largest node value of 2 pi r^{n-1} psi^2 at 1."""
    norm = math.exp(r_first) / (2.0 * math.pi)

    def mother(r: np.ndarray) -> np.ndarray:
        return np.sqrt(norm * r ** (1.0 - n) * np.exp(-r))

    return mother


class AffineCSConfig(BaseModel):
    """Quadrature, sampling grid and mother function of the discretized family."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, extra="forbid")

    n: int = 1
    r_max: float = 40.0
    r_min: Optional[float] = None  # default r_max / 1e4
    r_nodes: int = 512
    quadrature: str = "midpoint"
    x_samples: int = 256
    x_max: Optional[float] = None  # default pi / h
    x_points: Optional[Tuple[float, ...]] = None
    measure_exponent: Optional[int] = None  # default n - 1
    mother: Optional[Callable[[np.ndarray], np.ndarray]] = Field(default=None, exclude=True)

    @field_validator("n", "r_nodes", "x_samples")
    @classmethod
    def validate_counts(cls, v):
        if v < 1:
            raise ValueError("n, r_nodes and x_samples must be >= 1")
        return v

    @field_validator("quadrature")
    @classmethod
    def validate_quadrature(cls, v):
        if v not in ("midpoint", "trapezoid"):
            raise ValueError("quadrature must be 'midpoint' or 'trapezoid'")
        return v

    @model_validator(mode="after")
    def validate_domain(self):
        if not (math.isfinite(self.r_max) and self.r_max > 0):
            raise ValueError("r_max must be finite and > 0")
        if self.r_min is not None and not 0 < self.r_min < self.r_max:
            raise ValueError("need 0 < r_min < r_max")
        if self.quadrature == "trapezoid" and self.r_nodes < 2:
            raise ValueError("trapezoid quadrature needs at least 2 nodes")
        if self.x_max is not None and not self.x_max > 0:
            raise ValueError("x_max must be > 0")
        return self

    @classmethod
    def from_settings(cls, **overrides) -> "AffineCSConfig":
        cfg = get_settings().affine_cs
        values = dict(n=cfg.n, r_max=cfg.r_max, r_nodes=cfg.r_nodes, x_samples=cfg.x_samples,
                      x_max=cfg.x_max, quadrature=cfg.quadrature)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    @property
    def lower_limit(self) -> float:
        return self.r_min if self.r_min is not None else self.r_max / 1e4

    @property
    def mu(self) -> int:
        return self.n - 1 if self.measure_exponent is None else self.measure_exponent

    @property
    def spacing(self) -> float:
        span = self.r_max - self.lower_limit
        return span / self.r_nodes if self.quadrature == "midpoint" else span / (self.r_nodes - 1)

    def quadrature_rule(self) -> Tuple[np.ndarray, np.ndarray]:
        """Nodes r_i and weights w_i on [r_min, r_max]."""
        h = self.spacing
        if self.quadrature == "midpoint":
            nodes = self.lower_limit + (np.arange(self.r_nodes) + 0.5) * h
            weights = np.full(self.r_nodes, h)
        else:
            nodes = np.linspace(self.lower_limit, self.r_max, self.r_nodes)
            weights = np.full(self.r_nodes, h)
            weights[[0, -1]] *= 0.5
        if np.any(weights <= 0) or np.any(nodes <= 0):
            raise InvalidInput("degenerate quadrature: nodes and weights must be > 0")
        return nodes, weights

    def refined(self, level: int) -> "AffineCSConfig":
        """Halve the x spacing `level` times at fixed X."""
        return self.model_copy(update={"x_samples": self.x_samples * 2 ** level, "x_max": x_extent(self)})


def x_extent(cfg: AffineCSConfig) -> float:
    return cfg.x_max if cfg.x_max is not None else math.pi / cfg.spacing


def x_grid(cfg: AffineCSConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Sample points x_k and their quadrature weights dx_k.

    Uniform grid x_k = -X + k dx, dx = 2X / N on [-X, X); a single sample sits at
    x = 0 with weight 1, and explicit points carry weight 1.
    """
    if cfg.x_points is not None:
        points = np.asarray(cfg.x_points, dtype=float)
        if points.ndim != 1 or points.size == 0 or not np.all(np.isfinite(points)):
            raise InvalidInput("x_points must be a non-empty list of finite reals")
        return points, np.ones_like(points)
    if cfg.x_samples == 1:
        return np.zeros(1), np.ones(1)
    extent = x_extent(cfg)
    dx = 2.0 * extent / cfg.x_samples
    return -extent + dx * np.arange(cfg.x_samples), np.full(cfg.x_samples, dx)


def mother_samples(cfg: AffineCSConfig, nodes: np.ndarray) -> np.ndarray:
    """psi(r_i), rescaled so that max_i 2 pi r_i^{n-1} |psi(r_i)|^2 = 1."""
    mother = cfg.mother or default_mother(cfg.n, float(nodes[0]))
    psi = np.asarray(mother(nodes), dtype=np.complex128)
    if psi.shape != nodes.shape or not np.all(np.isfinite(psi)):
        raise InvalidInput("mother function must return finite values on every node")
    zero = np.abs(psi) == 0
    if np.any(zero[1:] & zero[:-1]):
        raise InvalidInput("mother function vanishes on consecutive nodes")
    symbol = 2.0 * math.pi * nodes ** (cfg.n - 1) * np.abs(psi) ** 2
    peak = float(np.max(symbol))
    if peak <= 0:
        raise InvalidInput("mother function is identically zero on the quadrature")
    if abs(peak - 1.0) > ADMISSIBILITY_TOL:
        logger.debug("rescaling mother function by %.6g to meet the sup condition", 1.0 / math.sqrt(peak))
        psi = psi / math.sqrt(peak)
    return psi


def gen_affine_cs(cfg: Optional[AffineCSConfig] = None) -> FamilyMatrix:
    """Column k: e^{-i x_k r_i} psi(r_i) sqrt(w_i r_i^mu) sqrt(dx_k)."""
    cfg = cfg or AffineCSConfig.from_settings()
    nodes, weights = cfg.quadrature_rule()
    psi = mother_samples(cfg, nodes)
    x, dx = x_grid(cfg)
    amplitude = psi * np.sqrt(weights * nodes ** cfg.mu)
    columns = np.exp(-1j * np.outer(nodes, x)) * amplitude[:, np.newaxis] * np.sqrt(dx)[np.newaxis, :]
    logger.debug("affine CS family: %d nodes, %d samples, X=%.6g", nodes.size, x.size, float(np.max(np.abs(x))))
    return make_family(columns, label=f"affine_cs(n={cfg.n},N_r={cfg.r_nodes},N_x={x.size})")


def analytic_frame_operator(cfg: AffineCSConfig) -> np.ndarray:
    """diag(2 pi r_i^mu |psi(r_i)|^2), the multiplication operator in weighted coordinates."""
    nodes, _ = cfg.quadrature_rule()
    psi = mother_samples(cfg, nodes)
    return np.diag(2.0 * math.pi * nodes ** cfg.mu * np.abs(psi) ** 2).astype(np.complex128)


def frame_operator_residual(cfg: AffineCSConfig, family: Optional[FamilyMatrix] = None) -> float:
    """||S - S_analytic||_max / ||S_analytic||_max."""
    family = family or gen_affine_cs(cfg)
    target = analytic_frame_operator(cfg)
    s = family.columns @ family.columns.conj().T
    return float(np.max(np.abs(s - target)) / np.max(np.abs(target)))


def affine_cs_kernel(cfg: AffineCSConfig) -> np.ndarray:
    """K_kl = (1/2pi) sum_i w_i e^{i(x_k - x_l) r_i}, scaled by sqrt(dx_k dx_l).

    Acts as the identity on range(C) when the x-grid is at least as fine as the
    r-grid (x_samples >= r_nodes); coarser x-grids alias.
    """
    nodes, weights = cfg.quadrature_rule()
    x, dx = x_grid(cfg)
    phases = np.exp(1j * np.outer(x, nodes))
    kernel = (phases * weights[np.newaxis, :]) @ phases.conj().T / (2.0 * math.pi)
    scale = np.sqrt(dx)
    return kernel * scale[:, np.newaxis] * scale[np.newaxis, :]


def affine_cs_generator(cfg: Optional[AffineCSConfig] = None) -> FamilyGenerator:
    """Truncation dimension d = number of quadrature nodes; the sampling grid is kept."""
    cfg = cfg or AffineCSConfig.from_settings()

    def rule(d: int) -> np.ndarray:
        return gen_affine_cs(cfg.model_copy(update={"r_nodes": d})).columns

    return FamilyGenerator(
        kind=GeneratorKind.AFFINE_CS,
        rule=rule,
        params=cfg.model_dump(),
        label=f"affine_cs(n={cfg.n})",
        coordinate_stable=False,
        min_dim=2,
    )
