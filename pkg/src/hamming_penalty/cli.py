from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from .analysis import interaction_graph, sparse_zero_witness, symmetrize
from .builders import BoundKind, CoefficientBounds, build_hamming, build_optimal
from .certify import BACKENDS, certification_grid, certify_optimality, run_certification_grid
from .config import DEFAULT_SETTINGS_PATH, SolverSettings
from .errors import ConfigError, PenaltyModelError, SolverError
from .landscape import penalty_report, weight_profile
from .model_io import (
    SpinConvention,
    model_to_dict,
    parse_rational,
    read_bounds,
    read_group,
    read_model,
    write_model,
)
from .models import convert

LOG = logging.getLogger("hamming_penalty")

COMMANDS = ("build", "verify", "certify", "convert", "symmetrize", "analyze")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


@dataclass
class CommandConfig:
    command: str
    kind: Optional[str] = None
    n: Optional[int] = None
    r: Optional[int] = None
    scale: Optional[Fraction] = None
    bounds: Optional[Path] = None
    model: Optional[Path] = None
    group: Optional[Path] = None
    output: Optional[Path] = None
    grid: bool = False
    n_min: int = 3
    n_max: int = 7
    include_tie: bool = True
    two_sided: bool = False
    symmetric: bool = False
    backend: str = "simplex"
    csv: Optional[Path] = None
    convention: SpinConvention = SpinConvention.PLUS
    jobs: int = 1
    settings_path: Optional[Path] = None

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "CommandConfig":
        scale = getattr(args, "scale", None)
        config = cls(
            command=args.command,
            kind=getattr(args, "kind", None),
            n=getattr(args, "n", None),
            r=getattr(args, "r", None),
            scale=None if scale is None else parse_rational(scale, "--scale"),
            bounds=getattr(args, "bounds", None),
            model=getattr(args, "model", None),
            group=getattr(args, "group", None),
            output=getattr(args, "output", None),
            grid=getattr(args, "grid", False),
            n_min=getattr(args, "n_min", 3),
            n_max=getattr(args, "n_max", 7),
            include_tie=not getattr(args, "no_tie", False),
            two_sided=getattr(args, "two_sided", False),
            symmetric=getattr(args, "symmetric", False),
            backend=getattr(args, "backend", "simplex"),
            csv=getattr(args, "csv", None),
            convention=SpinConvention(args.spin_convention),
            jobs=args.jobs if args.jobs is not None else (os.cpu_count() or 1),
            settings_path=args.settings,
        )
        config.validate()
        return config

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command {self.command!r}")
        if self.jobs < 1:
            raise ConfigError(f"--jobs must be positive, got {self.jobs}")
        if self.command == "build":
            if (self.scale is None) == (self.bounds is None):
                raise ConfigError("build needs exactly one of --scale or --bounds")
            if self.n is None or self.r is None:
                raise ConfigError("build needs --n and --r")
        if self.command == "certify":
            if self.bounds is None:
                raise ConfigError("certify needs --bounds")
            if self.grid:
                if self.n is not None or self.r is not None:
                    raise ConfigError("--grid replaces --n/--r")
                if not 2 <= self.n_min <= self.n_max:
                    raise ConfigError(f"Grid range needs 2 <= n-min <= n-max, got {self.n_min}..{self.n_max}")
            elif self.n is None or self.r is None:
                raise ConfigError("certify needs --n and --r (or --grid)")
            if self.backend not in BACKENDS:
                raise ConfigError(f"Unknown backend {self.backend!r}")
            if self.csv is not None and not self.grid:
                raise ConfigError("--csv is only written for --grid runs")
        if self.command in ("verify", "analyze") and self.r is None:
            raise ConfigError(f"{self.command} needs --r")
        if self.command == "symmetrize" and self.group is None:
            raise ConfigError("symmetrize needs --group")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="run_hamming_penalty.py",
        description="Optimal QUBO and Ising penalty models for Hamming-weight constraints.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only.")
    parser.add_argument(
        "--settings",
        type=Path,
        default=DEFAULT_SETTINGS_PATH,
        help="Solver settings JSON (tolerance, enumeration and LP guards).",
    )
    parser.add_argument(
        "--spin-convention",
        choices=[c.value for c in SpinConvention],
        default=SpinConvention.PLUS.value,
        help="Convention of Ising files read and written (minus: bit 1 <-> spin -1).",
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="Worker processes for enumeration and grid certification (default: CPU count).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="Build Q_r or H_r.")
    build.add_argument("--kind", choices=[k.value for k in BoundKind], required=True)
    build.add_argument("--n", type=int, required=True)
    build.add_argument("--r", type=int, required=True)
    build.add_argument("--scale", help="Energy scale E as 'p/q'.")
    build.add_argument("--bounds", type=Path, help="Bounds JSON; builds at the optimal scale.")
    build.add_argument("-o", "--output", type=Path)

    verify = sub.add_parser("verify", help="Exhaustive penalty report for a model file.")
    verify.add_argument("model", type=Path)
    verify.add_argument("--r", type=int, required=True)

    certify = sub.add_parser("certify", help="LP certificate(s) of the closed-form optimum.")
    certify.add_argument("--kind", choices=[k.value for k in BoundKind], required=True)
    certify.add_argument("--n", type=int)
    certify.add_argument("--r", type=int)
    certify.add_argument("--grid", action="store_true", help="Certify every n in [n-min, n-max], 1 <= r <= n-1.")
    certify.add_argument("--n-min", type=int, default=3)
    certify.add_argument("--n-max", type=int, default=7)
    certify.add_argument("--no-tie", action="store_true", help="Skip the (2r-1, 2) qubo tie profile.")
    certify.add_argument("--bounds", type=Path, required=True)
    certify.add_argument("--two-sided", action="store_true", help="Impose |b_j| <= B and |c_jk| <= C.")
    certify.add_argument("--symmetric", action="store_true", help="Solve the S_n-reduced LP.")
    certify.add_argument("--backend", choices=list(BACKENDS), default="simplex")
    certify.add_argument("--csv", type=Path, help="Write the grid table to CSV.")

    conv = sub.add_parser("convert", help="QUBO <-> Ising.")
    conv.add_argument("model", type=Path)
    conv.add_argument("-o", "--output", type=Path)

    sym = sub.add_parser("symmetrize", help="Average a model over a permutation group.")
    sym.add_argument("model", type=Path)
    sym.add_argument("--group", type=Path, required=True)
    sym.add_argument("-o", "--output", type=Path)

    analyze = sub.add_parser("analyze", help="Interaction graph and zero-penalty witness.")
    analyze.add_argument("model", type=Path)
    analyze.add_argument("--r", type=int, required=True)
    return parser


def _emit(payload: object) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _emit_model(model, config: CommandConfig) -> None:
    text = write_model(model, config.output, config.convention)
    if config.output is None:
        sys.stdout.write(text)
    else:
        LOG.info("Wrote %s model (n=%d) to %s", model.kind, model.n, config.output)


def _profiles(config: CommandConfig) -> List[CoefficientBounds]:
    profiles = [p for p in read_bounds(config.bounds) if p.kind.value == config.kind]
    if not profiles:
        raise ConfigError(f"No {config.kind} profile in {config.bounds}")
    return profiles


def _run_build(config: CommandConfig, settings: SolverSettings) -> int:
    if config.scale is not None:
        model = build_hamming(config.kind, config.n, config.r, config.scale)
        _emit_model(model, config)
        return EXIT_OK
    bounds = _profiles(config)[0]
    model, scale = build_optimal(config.n, config.r, bounds)
    LOG.info("Optimal scale %s", scale.to_dict())
    if config.output is None:
        _emit({"model": model_to_dict(model, config.convention), "scale": scale.to_dict()})
        return EXIT_OK
    _emit_model(model, config)
    _emit(scale.to_dict())
    return EXIT_OK


def _run_verify(config: CommandConfig, settings: SolverSettings) -> int:
    model = read_model(config.model, config.convention)
    profile = weight_profile(model, jobs=config.jobs, settings=settings)
    LOG.debug("Weight profile:\n%s", profile.to_frame().to_string(index=False))
    report = penalty_report(profile, config.r)
    _emit(report.to_dict())
    if report.exact_penalty:
        LOG.info("[PASS] exact penalty for r=%d with gap %s", config.r, report.gap)
        return EXIT_OK
    LOG.warning("[FAIL] not an exact penalty for r=%d (gap %s, witness %s)", config.r, report.gap, report.witness)
    return EXIT_FAILED


def _run_certify(config: CommandConfig, settings: SolverSettings) -> int:
    profiles = _profiles(config)
    if config.grid:
        tasks = certification_grid(
            profiles,
            n_values=range(config.n_min, config.n_max + 1),
            include_tie=config.include_tie,
            two_sided=config.two_sided,
            symmetric=config.symmetric,
            backend=config.backend,
        )
        certificates, frame, summary = run_certification_grid(tasks, jobs=config.jobs, settings=settings, logger=LOG)
        if config.csv is not None:
            config.csv.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(config.csv, index=False)
            LOG.info("Saved %d certificates to %s", len(frame), config.csv)
        _emit([c.to_dict() for c in certificates])
        return EXIT_OK if summary.all_passed else EXIT_FAILED

    certificates = [
        certify_optimality(
            config.n,
            config.r,
            bounds,
            two_sided=config.two_sided,
            symmetric=config.symmetric,
            backend=config.backend,
            settings=settings,
        )
        for bounds in profiles
    ]
    for cert in certificates:
        LOG.info("[%s] lp_gap=%.12g closed_form=%s", "PASS" if cert.passed else "FAIL", cert.lp_gap, cert.closed_form)
    _emit(certificates[0].to_dict() if len(certificates) == 1 else [c.to_dict() for c in certificates])
    return EXIT_OK if all(c.passed for c in certificates) else EXIT_FAILED


def _run_convert(config: CommandConfig, settings: SolverSettings) -> int:
    _emit_model(convert(read_model(config.model, config.convention)), config)
    return EXIT_OK


def _run_symmetrize(config: CommandConfig, settings: SolverSettings) -> int:
    model = read_model(config.model, config.convention)
    group = read_group(config.group)
    _emit_model(symmetrize(model, group, settings=settings), config)
    return EXIT_OK


def _run_analyze(config: CommandConfig, settings: SolverSettings) -> int:
    model = read_model(config.model, config.convention)
    graph = interaction_graph(model)
    profile = weight_profile(model, jobs=config.jobs, settings=settings)
    r = config.r
    if not 0 <= r <= model.n:
        raise ConfigError(f"--r {r} outside 0..{model.n}")
    vanishes = profile.minima[r] == 0 and profile.maxima[r] == 0
    payload = {"graph": graph.to_dict(), "r": r, "vanishes_on_target": vanishes, "zero_witness": None}
    if not graph.is_complete and vanishes and 1 <= r <= model.n - 1:
        payload["zero_witness"] = sparse_zero_witness(model, r, profile=profile).to_dict()
    _emit(payload)
    return EXIT_OK


HANDLERS = {
    "build": _run_build,
    "verify": _run_verify,
    "certify": _run_certify,
    "convert": _run_convert,
    "symmetrize": _run_symmetrize,
    "analyze": _run_analyze,
}


def run(config: CommandConfig) -> int:
    settings = SolverSettings.from_json(config.settings_path)
    return HANDLERS[config.command](config, settings)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return run(CommandConfig.from_namespace(args))
    except PenaltyModelError as exc:
        LOG.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INPUT
    except SolverError as exc:
        LOG.error("Solver failure: %s", exc)
        return EXIT_INTERNAL
    except Exception:  # noqa: BLE001
        LOG.exception("Unexpected error")
        return EXIT_INTERNAL
