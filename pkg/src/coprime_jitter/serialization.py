"""Config-file parsing and CSV/JSON emission used by the command line."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import __version__
from ._validation import as_fraction, check_int
from .core_model import DEFAULT_Q, CoprimeConfig
from .estimator import Component, SignalSpec
from .exceptions import CoprimeJitterError
from .weights import WeightTable


class ConfigError(CoprimeJitterError):
    """The config file is unreadable or malformed."""


@dataclass(frozen=True)
class RunConfig:
    config: CoprimeConfig
    seed: int = 0
    signal: SignalSpec | None = None
    snapshots: int | None = None
    trials: int | None = None
    fixed_jitter: bool = False


def fraction_str(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def config_to_dict(config: CoprimeConfig) -> dict:
    return {"M": config.M, "N": config.N, "r": config.r,
            "rho": fraction_str(config.rho), "Q": config.Q}


def _number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    return float(value)


def parse_signal(raw) -> SignalSpec:
    if not isinstance(raw, dict):
        raise ConfigError("signal must be an object")
    comps = raw.get("components", [])
    if not isinstance(comps, list):
        raise ConfigError("signal.components must be a list")
    parsed = []
    for i, c in enumerate(comps):
        if not isinstance(c, dict) or "a" not in c or "f" not in c:
            raise ConfigError(f"signal.components[{i}] needs numeric 'a' and 'f'")
        parsed.append(Component(_number(c["a"], "a"), _number(c["f"], "f"),
                                check_int(c.get("phase_seed", i), "phase_seed")))
    return SignalSpec(tuple(parsed),
                      noise_sigma=_number(raw.get("noise_sigma", 0.0), "noise_sigma"),
                      dc=_number(raw.get("dc", 0.0), "dc"))


def parse_run_config(raw: dict) -> RunConfig:
    """Validate a decoded config object; every failure becomes a :class:`ConfigError`."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    missing = [k for k in ("M", "N", "r", "rho") if k not in raw]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    try:
        config = CoprimeConfig(M=raw["M"], N=raw["N"], r=raw["r"],
                               rho=as_fraction(raw["rho"], "rho"), Q=raw.get("Q", DEFAULT_Q))
        signal = parse_signal(raw["signal"]) if "signal" in raw else None
        snapshots = check_int(raw["snapshots"], "snapshots", 1) if "snapshots" in raw else None
        trials = check_int(raw["trials"], "trials", 1) if "trials" in raw else None
        seed = check_int(raw.get("seed", 0), "seed", 0)
    except ConfigError:
        raise
    except (CoprimeJitterError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    fixed = raw.get("fixed_jitter", False)
    if not isinstance(fixed, bool):
        raise ConfigError("fixed_jitter must be true or false")
    return RunConfig(config, seed, signal, snapshots, trials, fixed)


def load_run_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_run_config(raw)


def run_config_to_dict(run: RunConfig) -> dict:
    out = config_to_dict(run.config)
    out["seed"] = run.seed
    if run.signal is not None:
        out["signal"] = {
            "components": [{"a": c.amplitude, "f": c.frequency, "phase_seed": c.phase_seed}
                           for c in run.signal.components],
            "noise_sigma": run.signal.noise_sigma,
            "dc": run.signal.dc,
        }
    if run.snapshots is not None:
        out["snapshots"] = run.snapshots
    if run.trials is not None:
        out["trials"] = run.trials
    if run.fixed_jitter:
        out["fixed_jitter"] = True
    return out


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _lag_str(lag) -> str:
    return fraction_str(lag) if isinstance(lag, Fraction) else str(int(lag))


def weights_csv(tables: list[WeightTable]) -> str:
    """CSV with columns ``lag,count,scheme,M,N,r``, one row per lag of each table."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["lag", "count", "scheme", "M", "N", "r"])
    for table in tables:
        c = table.config
        for lag, count in zip(table.lags, table.counts):
            writer.writerow([_lag_str(lag), int(count), table.scheme.value, c.M, c.N, c.r])
    return buf.getvalue()


def estimate_csv(comparison) -> str:
    """CSV with columns ``lag,estimate_blind,estimate_nonblind,truth,pairs_blind,pairs_nonblind``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["lag", "estimate_blind", "estimate_nonblind", "truth",
                     "pairs_blind", "pairs_nonblind"])
    for row in zip(comparison.lags, comparison.mean_blind, comparison.mean_nonblind,
                   comparison.truth, comparison.pairs_blind, comparison.pairs_nonblind):
        lag, eb, enb, truth, pb, pnb = row
        writer.writerow([int(lag), format_float(eb), format_float(enb), format_float(truth),
                         int(pb), int(pnb)])
    return buf.getvalue()


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if hasattr(obj, "item"):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def manifest(command: str, run: RunConfig, outputs: list, **extra) -> dict:
    """Record needed to re-run ``command``: resolved config, seed, outputs, version, time."""
    out = {
        "command": command,
        "config": run_config_to_dict(run),
        "seed": run.seed,
        "outputs": [str(p) for p in outputs],
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    out.update(extra)
    return out


def manifest_path(output: Path) -> Path:
    return output.with_name(output.name + ".manifest.json")
