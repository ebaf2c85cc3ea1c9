"""Command-line front end: simulate, estimate, infer and mc with file-based I/O."""

import argparse
import hashlib
import logging
import sys
import time
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import NoReturn

from pydantic import ValidationError

from larchfit.config import get_settings
from larchfit.exceptions import (
    ArgumentError,
    ConfigError,
    LarchError,
)
from larchfit.presets import PUBLISHED_RMSE, preset
from larchfit.schemas.estimate import ContrastKind, ContrastMethod, EstimateResult, FitOptions
from larchfit.schemas.experiment import ExperimentConfig
from larchfit.schemas.model import ModelDefinition
from larchfit.schemas.noise import NoiseSpec
from larchfit.schemas.trajectory import SimConfig
from larchfit.services.estimate_service import fit
from larchfit.services.infer_service import run_inference
from larchfit.services.io_service import (
    dump_json,
    load_json,
    read_series,
    write_json,
    write_report_csv,
    write_trajectory,
)
from larchfit.services.mc_service import config_hash, run_experiment
from larchfit.services.simulate_service import simulate

logger = logging.getLogger("larchfit")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2


class UsageError(Exception):
    """Bad command line; reported with exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def _digest(*parts: str) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part.encode("utf-8"))
    return h.hexdigest()


def _noise_from_args(args: argparse.Namespace) -> NoiseSpec:
    if args.noise == "student":
        if args.nu is None:
            raise UsageError("--noise student requires --nu")
        return NoiseSpec.student(args.nu)
    return NoiseSpec.gaussian()


def _kind_from_args(args: argparse.Namespace) -> ContrastKind:
    method = ContrastMethod(args.method)
    if method == ContrastMethod.SQML:
        if args.h is None:
            raise UsageError("--method sqml requires --h")
        return ContrastKind.sqml(args.h)
    if args.h is not None:
        raise UsageError(f"--h applies to sqml only, not {method}")
    return ContrastKind(method=method)


def cmd_simulate(args: argparse.Namespace) -> tuple[int, str, int]:
    settings = get_settings()
    model = load_json(args.model, ModelDefinition)
    noise = _noise_from_args(args)
    cfg = SimConfig(
        burn_in=args.burn_in if args.burn_in is not None else settings.BURN_IN,
        trunc_K=args.trunc_k if args.trunc_k is not None else settings.SIM_TRUNC_K,
    )
    seed = settings.resolve_seed(args.seed)
    trajectory = simulate(model, noise, args.n, cfg, seed)
    write_trajectory(trajectory, args.out)
    digest = _digest(
        model.model_dump_json(), noise.model_dump_json(), cfg.model_dump_json(), str(args.n)
    )
    return EXIT_OK, digest, seed


def cmd_estimate(args: argparse.Namespace) -> tuple[int, str, int]:
    settings = get_settings()
    model = load_json(args.model, ModelDefinition)
    x = read_series(args.data)
    kind = _kind_from_args(args)
    opts = load_json(args.options, FitOptions) if args.options else FitOptions()
    overrides = {
        key: value
        for key, value in (("starts", args.starts), ("trunc_K", args.trunc_k))
        if value is not None
    }
    if overrides:
        opts = FitOptions.model_validate(opts.model_dump() | overrides)
    seed = settings.resolve_seed(args.seed)
    result = fit(model.spec, x, kind, opts, seed)
    _emit(dump_json(result), args.out)
    digest = _digest(model.spec.model_dump_json(), kind.model_dump_json(), opts.model_dump_json())
    return (EXIT_OK if result.converged else EXIT_DOMAIN), digest, seed


def cmd_infer(args: argparse.Namespace) -> tuple[int, str, int]:
    estimate = load_json(args.estimate, EstimateResult)
    x = read_series(args.data)
    report = run_inference(estimate, x, args.level, args.rescale)
    _emit(dump_json(report), args.out)
    return EXIT_OK, _digest(estimate.model_dump_json(), str(args.level)), 0


def cmd_mc(args: argparse.Namespace) -> tuple[int, str, int]:
    if (args.config is None) == (args.preset is None):
        raise UsageError("mc needs exactly one of --config or --preset")
    settings = get_settings()
    if args.config is not None:
        cfg = load_json(args.config, ExperimentConfig)
        seed_in_config = "master_seed" in cfg.model_fields_set
    else:
        cfg = preset(args.preset)
        seed_in_config = False
    updates: dict[str, int] = {}
    if args.reps is not None:
        updates["reps"] = args.reps
    # --seed beats the config file, which beats LARCH_SEED
    if args.seed is not None or not seed_in_config:
        updates["master_seed"] = settings.resolve_seed(args.seed)
    if updates:
        cfg = ExperimentConfig.model_validate(cfg.model_dump() | updates)
    report = run_experiment(cfg, args.threads)
    write_report_csv(report, args.out)
    if args.json_out is not None:
        write_json(report, args.json_out)
    failures = sum(c.failures for c in report.cells)
    if failures:
        logger.warning(f"{failures} coordinate cells include failed replications")
    return EXIT_OK, config_hash(cfg), cfg.master_seed


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="larchfit", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate a trajectory")
    p.add_argument("--model", type=Path, required=True, help="model JSON with theta")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path, required=True, help=".csv or .json")
    p.add_argument("--noise", choices=["gaussian", "student"], default="gaussian")
    p.add_argument("--nu", type=int)
    p.add_argument("--burn-in", type=int)
    p.add_argument("--trunc-k", type=int)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("estimate", help="fit a model to a series")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--model", type=Path, required=True, help="model JSON; theta is ignored")
    p.add_argument("--method", choices=[m.value for m in ContrastMethod], default="lav")
    p.add_argument("--h", type=float)
    p.add_argument("--options", type=Path, help="FitOptions JSON")
    p.add_argument("--starts", type=int)
    p.add_argument("--trunc-k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path)
    p.set_defaults(handler=cmd_estimate)

    p = sub.add_parser("infer", help="sandwich covariance and confidence intervals")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--estimate", type=Path, required=True, help="EstimateResult JSON")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--rescale", action="store_true")
    p.add_argument("--out", type=Path)
    p.set_defaults(handler=cmd_infer)

    p = sub.add_parser("mc", help="Monte-Carlo RMSE experiment")
    p.add_argument("--config", type=Path, help="ExperimentConfig JSON")
    p.add_argument("--preset", choices=sorted(PUBLISHED_RMSE))
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int, help="override master_seed")
    p.add_argument("--threads", type=int, help="worker processes (default MC_WORKERS)")
    p.add_argument("--out", type=Path, required=True, help="CSV report")
    p.add_argument("--json-out", type=Path)
    p.set_defaults(handler=cmd_mc)
    return parser


def _configure_logging(verbose: int, quiet: bool) -> None:
    level_name = get_settings().LOG_LEVEL
    level = logging.WARNING if quiet else (logging.DEBUG if verbose else level_name)
    logging.basicConfig(
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    logger.setLevel(level)


def main(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand; returns 0, 1 (usage/config) or 2 (domain/convergence)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{parser.format_usage()}{exc}\n")
        return EXIT_USAGE
    _configure_logging(args.verbose, args.quiet)

    handler: Callable[[argparse.Namespace], tuple[int, str, int]] = args.handler
    started = time.perf_counter()
    try:
        code, digest, seed = handler(args)
    except (UsageError, ConfigError, ArgumentError, ValidationError) as exc:
        logger.error(str(exc))
        return EXIT_USAGE
    except LarchError as exc:
        # DomainError, DegenerateInputError, SingularMatrixError
        logger.error(str(exc))
        return EXIT_DOMAIN
    except OSError as exc:
        logger.error(f"I/O error: {exc}")
        return EXIT_USAGE
    logger.info(
        f"{args.command}: config {digest[:16]} seed {seed} "
        f"wall {time.perf_counter() - started:.3f}s exit {code}"
    )
    return code


def run() -> None:
    sys.exit(main())
