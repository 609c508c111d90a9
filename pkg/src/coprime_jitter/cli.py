"""Command line: ``coprime-jitter {verify,weights,estimate,complexity}``.

Exit codes: 0 success, 1 user or config error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .complexity import complexity_comparison
from .core_model import draw_jitter
from .difference_analysis import check_genericity, verify_proposition1
from .estimator import compare_schemes
from .exceptions import CoprimeJitterError
from .serialization import (
    ConfigError,
    RunConfig,
    config_to_dict,
    dumps,
    estimate_csv,
    load_run_config,
    manifest,
    manifest_path,
    weights_csv,
)
from .weights import weight_mapped_blind, weight_mapped_nonblind

EXIT_OK, EXIT_USER, EXIT_VERIFY = 0, 1, 2
THREADS_ENV = "COPRIME_JITTER_THREADS"


class UsageError(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def _parse_sweep(text: str) -> list[int]:
    match = re.fullmatch(r"\s*r\s*=\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not match:
        raise UsageError(f"--sweep expects 'r=A..B', got {text!r}")
    lo, hi = int(match[1]), int(match[2])
    if lo < 1 or hi < lo:
        raise UsageError(f"--sweep range must satisfy 1 <= A <= B, got {text!r}")
    return list(range(lo, hi + 1))


def _write(path: Path, text: str) -> None:
    if not path.parent.exists():
        raise UsageError(f"output directory does not exist: {path.parent}")
    try:
        path.write_text(text)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from exc


def _emit(out: str | None, text: str, command: str, run: RunConfig, **extra) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    _write(path, text)
    _write(manifest_path(path), dumps(manifest(command, run, [path], **extra)))


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


# ---------------------------------------------------------------------------


def _verify_seed(run: RunConfig, seed: int) -> dict:
    config = run.config
    jitter = draw_jitter(config, seed)
    if jitter.is_zero():
        return {"seed": seed, "status": "degenerate",
                "warning": "degenerate: ideal case (rho = 0), jitter claims skipped"}
    violations = check_genericity(jitter, config, "necessary")
    if violations:
        return {"seed": seed, "status": "non_generic",
                "warning": f"seed {seed}: jitter not generic ({len(violations)} violations), excluded",
                "genericity_violations": [v.to_dict() for v in violations]}
    report = verify_proposition1(config, jitter)
    return {"seed": seed, "status": "verified" if report.all_hold() else "failed",
            **report.to_dict()}


def cmd_verify(args, run: RunConfig) -> int:
    base = run.seed if args.seed is None else args.seed
    seeds = list(range(base, base + args.seeds))
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        runs = list(pool.map(lambda s: _verify_seed(run, s), seeds))
    warnings = [r.pop("warning") for r in runs if "warning" in r]
    for w in warnings:
        _warn(w)
    failed = [r["seed"] for r in runs if r["status"] == "failed"]
    result = {"config": config_to_dict(run.config), "seeds": seeds, "runs": runs,
              "warnings": warnings, "all_hold": not failed}
    _emit(args.out, dumps(result), "verify", run, seeds=seeds)
    if failed:
        print(f"error: closed-form/enumeration mismatch for generic seeds {failed}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _weight_tables(config, scheme: str):
    tables = []
    if scheme in ("blind", "both"):
        tables.append(weight_mapped_blind(config))
    if scheme in ("nonblind", "both"):
        table = weight_mapped_nonblind(config)
        for gap in table.gaps:
            _warn(f"r={config.r} lag {gap.lag}: band formula {gap.reason} "
                  f"{list(gap.formula_values)}, exact count {gap.value} used")
        tables.append(table)
    return tables


def cmd_weights(args, run: RunConfig) -> int:
    rs = _parse_sweep(args.sweep) if args.sweep else [run.config.r]
    if len(rs) > 1 and args.out is None:
        raise UsageError("--sweep requires --out")
    for r in rs:
        config = run.config.replace(r=r)
        tables = _weight_tables(config, args.scheme)
        text = weights_csv(tables)
        if args.out is None:
            sys.stdout.write(text)
            continue
        out = Path(args.out)
        if args.sweep:
            out = out.with_name(f"{out.stem}_r{r}{out.suffix}")
        gaps = [g._asdict() for t in tables for g in t.gaps]
        _write(out, text)
        _write(manifest_path(out), dumps(manifest("weights", RunConfig(config, run.seed), [out],
                                                  scheme=args.scheme, formula_gaps=gaps)))
    return EXIT_OK


def cmd_estimate(args, run: RunConfig) -> int:
    if run.signal is None:
        raise ConfigError("estimate needs a 'signal' object in the config")
    snapshots = args.snapshots if args.snapshots is not None else run.snapshots
    trials = args.trials if args.trials is not None else run.trials
    if snapshots is None or snapshots < 1:
        raise ConfigError("snapshots must be a positive integer")
    if trials is None or trials < 1:
        raise ConfigError("trials must be a positive integer")
    seed = run.seed if args.seed is None else args.seed
    comparison = compare_schemes(run.signal, run.config, snapshots, trials, seed,
                                 fixed_jitter=run.fixed_jitter)
    out = Path(args.out)
    summary_path = out.with_name(out.stem + ".summary.json")
    _write(out, estimate_csv(comparison))
    _write(summary_path, dumps(comparison.summary()))
    _write(manifest_path(out), dumps(manifest("estimate", run, [out, summary_path],
                                              snapshots=snapshots, trials=trials, run_seed=seed)))
    return EXIT_OK


def cmd_complexity(args, run: RunConfig) -> int:
    result = complexity_comparison(run.config)
    _emit(args.out, dumps(result), "complexity", run)
    return EXIT_OK if result["delta_identity_holds"] else EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH", help="JSON config file")
    common.add_argument("--out", metavar="PATH", help="output file (stdout if omitted)")

    parser = argparse.ArgumentParser(
        prog="coprime-jitter",
        description="Difference-set, weight-function and estimation tools for jittered "
                    "multi-period co-prime samplers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check distinct-value counts over seeds")
    p.add_argument("--seed", type=int, help="first jitter seed (default: config seed)")
    p.add_argument("--seeds", type=int, default=5, help="number of consecutive seeds")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("weights", parents=[common], help="emit weight-function CSV")
    p.add_argument("--scheme", choices=["blind", "nonblind", "both"], default="nonblind")
    p.add_argument("--sweep", metavar="r=A..B", help="one CSV per period count")
    p.add_argument("--seed", type=int, help="recorded in the manifest only")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("estimate", parents=[common], help="Monte-Carlo blind vs non-blind estimation")
    p.add_argument("--seed", type=int)
    p.add_argument("--snapshots", type=int)
    p.add_argument("--trials", type=int)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("complexity", parents=[common], help="multiplication/addition counts")
    p.set_defaults(func=cmd_complexity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USER
    try:
        if args.command == "verify" and args.seeds < 1:
            raise UsageError("--seeds must be >= 1")
        if args.command == "estimate" and args.out is None:
            raise UsageError("estimate requires --out")
        run = load_run_config(args.config)
        return args.func(args, run)
    except (UsageError, CoprimeJitterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER


if __name__ == "__main__":
    sys.exit(main())
