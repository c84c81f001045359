"""CLI subcommands: classify, dual, reconstruct, triplet, fusion, examples."""

import argparse
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from config.settings import get_settings
from framekit.errors import InvalidInput, ProjectsOntoSpan
from framekit.examples.affine_cs import AffineCSConfig, affine_cs_generator
from framekit.examples.catalog import WORKED_EXAMPLES, run_worked_examples
from framekit.examples.diagonal import diagonal_generator
from framekit.examples.multiplier import multiplier_generator
from framekit.frames.dual_recon import (
    RECONSTRUCTION_TOL,
    canonical_dual,
    dual_bound_check,
    dual_from_lower,
    duality_residual,
    gram_operators,
    reconstruction_report,
    triplet_report,
)
from framekit.frames.family import FamilyGenerator, FamilyMatrix, TruncationSweep
from framekit.frames.frame_ops import classify_sweep, diagnostics, single_verdict
from framekit.frames.fusion import FUSION_RECONSTRUCTION_TOL, fusion_diagnostics, fusion_dual, make_subspace_family
from framekit.linalg.spectral import RankTolerance
from framekit.models import DualityReport, SweepPoint, SweepVerdict
from framekit.reporting.envelope import ReportEnvelope, build_envelope, dumps, write_envelope
from framekit.reporting.matrix_io import read_family, read_matrix, read_vector, write_blocks, write_family
from framekit.reporting.series import TRIPLET_COLUMNS, write_series, write_sweep_series
from framekit.reporting.validators import validate_dims
from framekit.tracking import RunTracker

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

ALL_FORMULAS_TOL = 1e-7

_GENERATOR_ALIASES = {
    "diag": "diag",
    "diagonal": "diag",
    "diagonal_weights": "diag",
    "multiplier": "multiplier",
    "multiplier_model": "multiplier",
    "affine_cs": "affine_cs",
    "affine": "affine_cs",
}


class Command(str, Enum):
    CLASSIFY = "classify"
    DUAL = "dual"
    RECONSTRUCT = "reconstruct"
    TRIPLET = "triplet"
    FUSION = "fusion"
    EXAMPLES = "examples"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class RunConfig(BaseModel):
    """Everything one command run needs; flags and --config files map onto these fields."""

    model_config = ConfigDict(extra="forbid")

    command: Command
    family: Optional[str] = None
    generator: Optional[str] = None
    weights: Optional[str] = None
    symbol: Optional[str] = None
    affine: Dict[str, Any] = {}
    dims: Optional[List[int]] = None
    d: Optional[int] = None
    tol: Optional[float] = None
    vector: Optional[str] = None
    basis_index: int = 1
    seed: int = 0
    lower: bool = False
    strict: bool = False
    workers: Optional[int] = None
    subspaces: List[str] = []
    subspace_weights: Optional[List[float]] = None
    examples: Optional[List[str]] = None
    output_dir: Optional[str] = None
    formats: List[OutputFormat] = [OutputFormat.JSON, OutputFormat.CSV]

    @field_validator("generator")
    @classmethod
    def validate_generator(cls, v):
        if v is None:
            return v
        if v not in _GENERATOR_ALIASES:
            raise ValueError(f"unknown generator {v!r}; expected diag, multiplier or affine_cs")
        return _GENERATOR_ALIASES[v]

    @field_validator("dims")
    @classmethod
    def validate_sweep(cls, v):
        if v is not None:
            TruncationSweep(tuple(v))
        return v

    @field_validator("tol")
    @classmethod
    def validate_tol(cls, v):
        if v is not None and not v > 0:
            raise ValueError("tol must be > 0")
        return v

    @model_validator(mode="after")
    def validate_source(self):
        if self.command in (Command.FUSION, Command.EXAMPLES):
            if self.command is Command.FUSION and not self.subspaces:
                raise ValueError("fusion needs at least one --subspace basis file")
            return self
        if (self.family is None) == (self.generator is None):
            raise ValueError("give exactly one input source: --family or --generator")
        if self.generator == "diag" and not self.weights:
            raise ValueError("the diag generator needs --weights")
        if self.generator == "multiplier" and not self.symbol:
            raise ValueError("the multiplier generator needs --symbol")
        if self.examples:
            raise ValueError("--example only applies to the examples command")
        return self

    def tolerance(self) -> Optional[RankTolerance]:
        return RankTolerance(self.tol) if self.tol is not None else None

    def out_dir(self) -> Path:
        return Path(self.output_dir or get_settings().app.output_dir)

    def wants(self, fmt: OutputFormat) -> bool:
        return fmt in self.formats

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", exclude_none=True)


def _json_print(payload: Any) -> None:
    print(dumps(payload))


def _parse_json_object(value: str) -> Dict[str, Any]:
    path = Path(value)
    if not path.is_file():
        raise InvalidInput(f"config file not found: {value}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"config file {value} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise InvalidInput("config file must hold a JSON object")
    return payload


def _add_source_args(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--family", type=str, default=None, help="CSV family file (columns are psi_k)")
    cmd.add_argument("--generator", type=str, default=None, help="diag | multiplier | affine_cs")
    cmd.add_argument("--weights", type=str, default=None, help="weight rule, e.g. pow:-1")
    cmd.add_argument("--symbol", type=str, default=None, help="multiplier symbol rule, e.g. pow:2")
    cmd.add_argument("--affine", type=str, default=None, help="JSON object of affine CS parameters")
    cmd.add_argument("--dims", type=str, default=None, help="truncation sweep, e.g. 8,16,32")
    cmd.add_argument("--d", type=int, default=None, help="single truncation dimension")


def _add_common_args(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--config", type=str, default=None, help="JSON run config; flags override it")
    cmd.add_argument("--tol", type=float, default=None, help="relative rank cutoff")
    cmd.add_argument("--output-dir", dest="output_dir", type=str, default=None)
    cmd.add_argument("--formats", type=str, default=None, help="comma list of json,csv")


def register_commands(sub: argparse._SubParsersAction) -> None:
    """Register framekit subcommands on an existing subparsers group."""
    classify_cmd = sub.add_parser("classify", help="Frame bounds and semi-frame verdict")
    _add_source_args(classify_cmd)
    classify_cmd.add_argument("--workers", type=int, default=None)
    _add_common_args(classify_cmd)

    dual_cmd = sub.add_parser("dual", help="Canonical dual (or the dual of a lower semi-frame)")
    _add_source_args(dual_cmd)
    dual_cmd.add_argument("--lower", action="store_true", default=None,
                          help="treat the family as a lower semi-frame and build its upper dual")
    _add_common_args(dual_cmd)

    reconstruct_cmd = sub.add_parser("reconstruct", help="Residuals of every reconstruction formula")
    _add_source_args(reconstruct_cmd)
    reconstruct_cmd.add_argument("--vector", type=str, default=None, help="vector file; random if omitted")
    reconstruct_cmd.add_argument("--seed", type=int, default=None)
    reconstruct_cmd.add_argument("--strict", action="store_true", default=None)
    _add_common_args(reconstruct_cmd)

    triplet_cmd = sub.add_parser("triplet", help="Coefficient triplet norms, plot-ready series")
    _add_source_args(triplet_cmd)
    triplet_cmd.add_argument("--basis-index", dest="basis_index", type=int, default=None,
                             help="coefficient vector c = e_p (1-based)")
    triplet_cmd.add_argument("--vector", type=str, default=None, help="coefficient vector file")
    _add_common_args(triplet_cmd)

    fusion_cmd = sub.add_parser("fusion", help="Frames of subspaces")
    fusion_cmd.add_argument("--subspace", dest="subspaces", action="append", default=None,
                            help="CSV basis of one subspace (repeat)")
    fusion_cmd.add_argument("--subspace-weights", dest="subspace_weights", type=str, default=None)
    fusion_cmd.add_argument("--vector", type=str, default=None)
    fusion_cmd.add_argument("--seed", type=int, default=None)
    _add_common_args(fusion_cmd)

    examples_cmd = sub.add_parser("examples", help="Run every worked example")
    examples_cmd.add_argument("--example", dest="examples", action="append", default=None,
                              choices=sorted(WORKED_EXAMPLES))
    examples_cmd.add_argument("--dims", type=str, default=None)
    _add_common_args(examples_cmd)


def _floats(text: str) -> List[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise InvalidInput(f"expected comma-separated numbers, got {text!r}") from None


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge the --config file with explicit flags (flags win)."""
    values: Dict[str, Any] = {}
    config_path = getattr(args, "config", None)
    if config_path:
        values.update(_parse_json_object(config_path))
    for key, value in vars(args).items():
        if key in ("config", "command") or value is None:
            continue
        if key == "dims":
            value = validate_dims(value)
        elif key == "affine":
            value = _parse_affine(value)
        elif key == "formats":
            value = [p.strip() for p in value.split(",") if p.strip()]
        elif key == "subspace_weights":
            value = _floats(value)
        values[key] = value
    values["command"] = args.command
    if isinstance(values.get("dims"), str):
        values["dims"] = validate_dims(values["dims"])
    return RunConfig.model_validate(values)


def _parse_affine(value: str) -> Dict[str, Any]:
    try:
        payload = json.loads(value)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"--affine must be a JSON object: {exc}") from exc
    if not isinstance(payload, dict):
        raise InvalidInput("--affine must be a JSON object")
    return payload


def make_generator(config: RunConfig) -> FamilyGenerator:
    if config.generator == "diag":
        return diagonal_generator(config.weights)
    if config.generator == "multiplier":
        return multiplier_generator(config.symbol)
    return affine_cs_generator(AffineCSConfig.from_settings(**config.affine))


def load_family(config: RunConfig, d: Optional[int] = None) -> FamilyMatrix:
    """The family file, or the generator truncated at d (default: --d, else the last sweep dim)."""
    if config.family is not None:
        return read_family(config.family)
    generator = make_generator(config)
    if d is None:
        d = config.d or (config.dims[-1] if config.dims else _default_dim(config))
    return generator.produce(d)


def _default_dim(config: RunConfig) -> int:
    if config.generator == "affine_cs":
        return AffineCSConfig.from_settings(**config.affine).r_nodes
    return 8


def _finish(config: RunConfig, tracker: RunTracker, payload: Any, exit_code: int) -> Tuple[ReportEnvelope, int]:
    envelope = build_envelope(config.command.value, payload, config=config.echo(),
                              timing=tracker.get_activity_summary(), exit_code=exit_code)
    if config.wants(OutputFormat.JSON):
        write_envelope(config.out_dir() / f"{config.command.value}.json", envelope)
    return envelope, exit_code


def cmd_classify(config: RunConfig, tracker: Optional[RunTracker] = None) -> Tuple[ReportEnvelope, int]:
    tracker = tracker or RunTracker()
    step = tracker.start_activity("classify", {"generator": config.generator, "family": config.family})
    tol = config.tolerance()
    if config.family is not None:
        sweep_cfg = get_settings().sweep
        diag = diagnostics(load_family(config), tol)
        verdict = SweepVerdict(
            label=diag.label,
            points=[SweepPoint(d=diag.dim, lower_bound=diag.lower_bound, upper_bound=diag.upper_bound,
                               rank_S=diag.rank_S, total=diag.total, condition=diag.condition)],
            verdict=single_verdict(diag),
            bounded_exponent=sweep_cfg.bounded_exponent,
            unbounded_exponent=sweep_cfg.unbounded_exponent,
            criterion="single truncation: a total family is a frame",
        )
    else:
        verdict = classify_sweep(make_generator(config), config.dims, tol, workers=config.workers)
    tracker.complete_activity(step)
    if config.wants(OutputFormat.CSV):
        write_sweep_series(config.out_dir() / "classify_series.csv", verdict)
    logger.info("verdict %s for %s", verdict.verdict.value, verdict.label)
    return _finish(config, tracker, verdict, EXIT_OK)


def cmd_dual(config: RunConfig, tracker: Optional[RunTracker] = None) -> Tuple[ReportEnvelope, int]:
    tracker = tracker or RunTracker()
    tol = config.tolerance()
    family = load_family(config)
    step = tracker.start_activity("dual", {"label": family.label, "lower": config.lower})
    if config.lower:
        dual = dual_from_lower(family, tol)
        report = dual_bound_check(dual, family, tol)
        residual = report.duality_residual
    else:
        dual = canonical_dual(family, tol)
        residual = duality_residual(family, dual)
        upper = diagnostics(family, tol).upper_bound
        dual_lower = dual.frame_spectral.lambda_min
        report = DualityReport(
            upper_bound=upper,
            required_lower_bound=1.0 / upper,
            dual_lower_bound=dual_lower,
            duality_residual=residual,
            precondition_met=residual <= RECONSTRUCTION_TOL,
            holds=dual_lower >= 1.0 / upper - 1e-9,
        )
    tracker.complete_activity(step)
    if config.wants(OutputFormat.CSV):
        write_family(config.out_dir() / "dual.csv", dual)
    projected = "dual_on_range" in dual.flags
    exit_code = EXIT_NUMERICAL if residual > RECONSTRUCTION_TOL and not projected else EXIT_OK
    return _finish(config, tracker, report, exit_code)


def cmd_reconstruct(config: RunConfig, tracker: Optional[RunTracker] = None) -> Tuple[ReportEnvelope, int]:
    tracker = tracker or RunTracker()
    tol = config.tolerance()
    family = load_family(config)
    if config.vector is not None:
        f = read_vector(config.vector, family.dim)
    else:
        rng = np.random.default_rng(config.seed)
        f = rng.standard_normal(family.dim) + 1j * rng.standard_normal(family.dim)
    step = tracker.start_activity("reconstruct", {"label": family.label})
    report = reconstruction_report(family, f, tol)
    tracker.complete_activity(step)
    if config.strict and not report.total:
        raise ProjectsOntoSpan(f"family {family.label!r} does not span the space")
    failing = [r for r in report.residuals
               if not r.projected and r.formula.value != "coefficients" and r.residual > ALL_FORMULAS_TOL]
    exit_code = EXIT_NUMERICAL if failing else EXIT_OK
    return _finish(config, tracker, report, exit_code)


def cmd_triplet(config: RunConfig, tracker: Optional[RunTracker] = None) -> Tuple[ReportEnvelope, int]:
    tracker = tracker or RunTracker()
    tol = config.tolerance()
    if config.family is not None or not config.dims:
        sizes = [None]
    else:
        sizes = list(config.dims)
    rows = []
    report = None
    for d in sizes:
        family = load_family(config, d)
        step = tracker.start_activity("triplet", {"label": family.label})
        if config.vector is not None:
            c = read_vector(config.vector, family.count)
        else:
            if not 1 <= config.basis_index <= family.count:
                raise InvalidInput(f"basis index {config.basis_index} outside 1..{family.count}")
            c = np.zeros(family.count, dtype=np.complex128)
            c[config.basis_index - 1] = 1.0
        report = triplet_report(family, c, family.columns @ c, gram_operators(family, tol), tol)
        bounds = diagnostics(family, tol)
        rows.append({"d": family.dim, "lower_bound": bounds.lower_bound, "upper_bound": bounds.upper_bound,
                     **report.model_dump()})
        tracker.complete_activity(step)
    if config.wants(OutputFormat.CSV):
        write_series(config.out_dir() / "triplet_series.csv", TRIPLET_COLUMNS, rows)
    return _finish(config, tracker, report, EXIT_OK)


def cmd_fusion(config: RunConfig, tracker: Optional[RunTracker] = None) -> Tuple[ReportEnvelope, int]:
    tracker = tracker or RunTracker()
    tol = config.tolerance()
    family = make_subspace_family([read_matrix(p) for p in config.subspaces], config.subspace_weights,
                                  label="fusion")
    if config.vector is not None:
        f = read_vector(config.vector, family.dim)
    else:
        rng = np.random.default_rng(config.seed)
        f = rng.standard_normal(family.dim) + 1j * rng.standard_normal(family.dim)
    step = tracker.start_activity("fusion", {"subspaces": len(family)})
    report = fusion_diagnostics(family, f, tol)
    tracker.complete_activity(step)
    if config.wants(OutputFormat.CSV) and report.total:
        write_blocks(config.out_dir(), fusion_dual(family, tol).bases, stem="dual_subspace")
    failing = report.total and (
        (report.reconstruction_residual or 0.0) > FUSION_RECONSTRUCTION_TOL
        or (report.duality_residual or 0.0) > FUSION_RECONSTRUCTION_TOL
    )
    return _finish(config, tracker, report, EXIT_NUMERICAL if failing else EXIT_OK)


def cmd_examples(config: RunConfig, tracker: Optional[RunTracker] = None) -> Tuple[ReportEnvelope, int]:
    tracker = tracker or RunTracker()
    step = tracker.start_activity("examples", {"examples": config.examples})
    results = run_worked_examples(config.dims, config.examples)
    tracker.complete_activity(step)
    summary = {}
    for name, report in results.items():
        if config.wants(OutputFormat.JSON):
            envelope = build_envelope(f"examples/{name}", report, config=config.echo())
            write_envelope(config.out_dir() / "examples" / f"{name}.json", envelope)
        if config.wants(OutputFormat.CSV) and isinstance(report, SweepVerdict):
            write_sweep_series(config.out_dir() / "examples" / f"{name}_series.csv", report)
        summary[name] = report.model_dump()
    return _finish(config, tracker, summary, EXIT_OK)


COMMANDS = {
    Command.CLASSIFY: cmd_classify,
    Command.DUAL: cmd_dual,
    Command.RECONSTRUCT: cmd_reconstruct,
    Command.TRIPLET: cmd_triplet,
    Command.FUSION: cmd_fusion,
    Command.EXAMPLES: cmd_examples,
}


def handle(args: argparse.Namespace) -> Optional[int]:
    """Handle a framekit subcommand. Returns exit code, or None if not ours."""
    try:
        command = Command(args.command)
    except ValueError:
        return None
    config = build_config(args)
    envelope, exit_code = COMMANDS[command](config)
    _json_print(envelope.to_dict())
    return exit_code
