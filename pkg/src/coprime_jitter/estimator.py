"""Synthetic WSS signals on jittered co-prime grids and their autocorrelation estimates.

:class:`CoprimeAutocorrelation` follows the scikit-learn estimator protocol:
constructor arguments are hyper-parameters, :meth:`~CoprimeAutocorrelation.fit`
consumes a :class:`SnapshotBatch` and stores the per-lag estimate in
trailing-underscore attributes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isfinite

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_int, check_scheme
from .core_model import CoprimeConfig, JitterRealization, PerturbedGrid, _draw_ticks, build_grid
from .exceptions import CoprimeJitterError, EmptyLag, RangeError
from .weights import _mapped_lags, blind_instants


@dataclass(frozen=True)
class Component:
    """One random-phase sinusoid ``amplitude * cos(2*pi*frequency*t + phase)``."""

    amplitude: float
    frequency: float
    phase_seed: int = 0


@dataclass(frozen=True)
class SignalSpec:
    """Sum of random-phase sinusoids, a constant offset and white Gaussian noise.

    Phases are redrawn uniformly on ``[0, 2*pi)`` for every snapshot, which
    makes the process wide-sense stationary with autocorrelation
    ``dc**2 + sum(a**2 / 2 * cos(2*pi*f*l)) + noise_sigma**2 * [l == 0]``.
    """

    components: tuple = ()
    noise_sigma: float = 0.0
    dc: float = 0.0

    def __post_init__(self):
        comps = tuple(c if isinstance(c, Component) else Component(**c) for c in self.components)
        object.__setattr__(self, "components", comps)
        for c in comps:
            if not (isfinite(c.amplitude) and isfinite(c.frequency)):
                raise CoprimeJitterError(f"non-finite component {c}")
            if not 0 <= c.frequency < 0.5:
                raise RangeError(f"frequency must lie in [0, 1/2), got {c.frequency}")
        if not (isfinite(self.noise_sigma) and self.noise_sigma >= 0):
            raise RangeError(f"noise_sigma must be finite and >= 0, got {self.noise_sigma}")
        if not isfinite(self.dc):
            raise CoprimeJitterError(f"dc must be finite, got {self.dc}")

    def autocorrelation(self, lags) -> np.ndarray:
        lags = np.asarray(lags, dtype=float)
        out = np.full(lags.shape, self.dc ** 2, dtype=float)
        for c in self.components:
            out += 0.5 * c.amplitude ** 2 * np.cos(2 * np.pi * c.frequency * lags)
        out += np.where(lags == 0, self.noise_sigma ** 2, 0.0)
        return out


@dataclass(frozen=True, eq=False)
class SnapshotBatch:
    """``S`` snapshots of one jittered sampler configuration.

    Arrays are indexed ``[snapshot, sample]``. ``eps*_ticks`` hold the jitter
    in units of ``1/Q``; ``x1``/``x2`` the sample values at the perturbed
    instants of the ``M``-spaced and ``N``-spaced samplers.
    """

    config: CoprimeConfig
    eps1_ticks: np.ndarray
    eps2_ticks: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    fixed_jitter: bool = False

    @property
    def S(self) -> int:
        return self.x1.shape[0]

    def ticks(self) -> tuple[np.ndarray, np.ndarray]:
        return _instant_ticks(self.config, self.eps1_ticks, self.eps2_ticks)

    def grid(self, s: int) -> PerturbedGrid:
        jitter = JitterRealization(self.eps1_ticks[s].tolist(), self.eps2_ticks[s].tolist(),
                                   self.config.Q)
        return build_grid(self.config, jitter)


def _instant_ticks(config: CoprimeConfig, eps1: np.ndarray, eps2: np.ndarray):
    t1 = config.Q * config.M * np.arange(config.n_first, dtype=np.int64) + eps1
    t2 = config.Q * config.N * np.arange(config.n_second, dtype=np.int64) + eps2
    return t1, t2


def _seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(check_int(seed, "seed", minimum=0))


def generate_snapshots(spec: SignalSpec, config: CoprimeConfig, S: int, seed,
                       fixed_jitter: bool = False) -> SnapshotBatch:
    """Sample ``S`` independent snapshots of ``spec`` on freshly jittered grids.

    Deterministic for a given ``seed`` (an int or a ``SeedSequence``). With
    ``fixed_jitter`` one jitter realization is shared by all snapshots.
    """
    S = check_int(S, "S", minimum=1)
    jitter_ss, phase_ss, noise_ss = _seed_sequence(seed).spawn(3)
    jrng = np.random.default_rng(jitter_ss)
    if fixed_jitter:
        e1, e2 = _draw_ticks(config, jrng)
        eps1 = np.tile(e1, (S, 1))
        eps2 = np.tile(e2, (S, 1))
    else:
        rows = [_draw_ticks(config, jrng) for _ in range(S)]
        eps1 = np.array([r[0] for r in rows], dtype=np.int64).reshape(S, config.n_first)
        eps2 = np.array([r[1] for r in rows], dtype=np.int64).reshape(S, config.n_second)

    t1, t2 = (t / config.Q for t in _instant_ticks(config, eps1, eps2))

    x1 = np.full(t1.shape, float(spec.dc))
    x2 = np.full(t2.shape, float(spec.dc))
    for idx, (c, ss) in enumerate(zip(spec.components, phase_ss.spawn(len(spec.components)))):
        prng = np.random.default_rng([*ss.generate_state(2), c.phase_seed, idx])
        phase = prng.uniform(0.0, 2 * np.pi, size=(S, 1))
        x1 += c.amplitude * np.cos(2 * np.pi * c.frequency * t1 + phase)
        x2 += c.amplitude * np.cos(2 * np.pi * c.frequency * t2 + phase)
    if spec.noise_sigma > 0:
        nrng = np.random.default_rng(noise_ss)
        x1 += spec.noise_sigma * nrng.standard_normal(x1.shape)
        x2 += spec.noise_sigma * nrng.standard_normal(x2.shape)
    return SnapshotBatch(config, eps1, eps2, x1, x2, fixed_jitter)


@dataclass(frozen=True, eq=False)
class AutocorrEstimate:
    """Autocorrelation at lags ``0 .. r*M*N - 1``; ``NaN`` where no pair exists."""

    lags: np.ndarray
    values: np.ndarray
    pair_counts: np.ndarray
    scheme: str
    empty_lags: tuple = field(default=())


def _pairs(batch: SnapshotBatch, scheme: str):
    """Lag per retained pair, product per retained pair (flattened over snapshots)."""
    config = batch.config
    if scheme == "nonblind":
        t1, t2 = batch.ticks()
        t = np.concatenate([t1, t2], axis=1)
        x = np.concatenate([batch.x1, batch.x2], axis=1)
        lag = _mapped_lags(t[:, :, None] - t[:, None, :], config.Q)
    else:
        keep_m = np.arange(config.n_second) % config.M != 0
        x = np.concatenate([batch.x1, batch.x2[:, keep_m]], axis=1)
        ideal = blind_instants(config)
        lag = np.broadcast_to(ideal[:, None] - ideal[None, :], (batch.S,) + (len(ideal),) * 2)
    k = x.shape[1]
    upper = np.triu(np.ones((k, k), dtype=bool))
    keep = (lag > 0) | ((lag == 0) & upper)
    products = x[:, :, None] * x[:, None, :]
    return lag[keep], products[keep]


class CoprimeAutocorrelation(BaseEstimator):
    """Per-lag autocorrelation estimate pooled over the snapshots of a batch.

    Parameters
    ----------
    scheme : {"nonblind", "blind"}
        ``"blind"`` pairs samples by their ideal instants and keeps one copy
        of each coincident instant (the ``M``-spaced one). ``"nonblind"``
        uses all samples and maps each true jittered pair difference to its
        nearest integer lag.

    Attributes
    ----------
    lags_ : ndarray of int
        ``0 .. r*M*N - 1``.
    autocorrelation_ : ndarray of float
        Sum of products divided by the pair count, ``NaN`` at empty lags.
    pair_counts_ : ndarray of int
        Pairs pooled per lag over all snapshots.
    empty_lags_ : tuple of int
        Lags without any contributing pair (holes of the coarray).
    n_snapshots_ : int
    config_ : CoprimeConfig
    """

    def __init__(self, scheme: str = "nonblind"):
        self.scheme = scheme

    def fit(self, X: SnapshotBatch, y=None) -> "CoprimeAutocorrelation":
        check_scheme(self.scheme)
        if not isinstance(X, SnapshotBatch):
            raise TypeError(f"expected a SnapshotBatch, got {type(X).__name__}")
        span = X.config.span
        lag, prod = _pairs(X, self.scheme)
        counts = np.bincount(lag, minlength=span)
        sums = np.bincount(lag, weights=prod, minlength=span)
        with np.errstate(invalid="ignore", divide="ignore"):
            values = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
        self.lags_ = np.arange(span, dtype=np.int64)
        self.autocorrelation_ = values
        self.pair_counts_ = counts.astype(np.int64)
        self.empty_lags_ = tuple(int(l) for l in np.flatnonzero(counts == 0))
        self.n_snapshots_ = X.S
        self.config_ = X.config
        return self

    def predict(self, lags) -> np.ndarray:
        """Estimated autocorrelation at integer ``lags`` (negative lags mirror)."""
        check_is_fitted(self, "autocorrelation_")
        lags = np.abs(np.asarray(lags, dtype=np.int64))
        if lags.size and lags.max() >= len(self.lags_):
            raise RangeError(f"lags must satisfy |l| < {len(self.lags_)}")
        empty = np.intersect1d(lags, self.empty_lags_)
        if empty.size:
            raise EmptyLag(f"no contributing pairs at lags {empty.tolist()}")
        return self.autocorrelation_[lags]

    def to_estimate(self) -> AutocorrEstimate:
        check_is_fitted(self, "autocorrelation_")
        return AutocorrEstimate(self.lags_, self.autocorrelation_, self.pair_counts_,
                                self.scheme, self.empty_lags_)


def estimate_autocorrelation(batch: SnapshotBatch, scheme: str = "nonblind") -> AutocorrEstimate:
    return CoprimeAutocorrelation(scheme=scheme).fit(batch).to_estimate()


@dataclass(frozen=True, eq=False)
class SchemeComparison:
    """Monte-Carlo comparison of the blind and non-blind estimates against the truth."""

    lags: np.ndarray
    truth: np.ndarray
    mean_blind: np.ndarray
    mean_nonblind: np.ndarray
    mse_blind_per_lag: np.ndarray
    mse_nonblind_per_lag: np.ndarray
    pairs_blind: np.ndarray
    pairs_nonblind: np.ndarray
    mse_blind: float
    mse_nonblind: float
    ci: dict
    trials: int
    snapshots: int

    @property
    def pair_ratio(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.pairs_blind > 0, self.pairs_nonblind / np.maximum(self.pairs_blind, 1),
                            np.nan)

    def summary(self) -> dict:
        return {"mse_blind": self.mse_blind, "mse_nonblind": self.mse_nonblind, "ci": self.ci,
                "trials": self.trials, "snapshots": self.snapshots}


def _ci95(samples: np.ndarray) -> list[float]:
    mean = float(np.mean(samples))
    if len(samples) < 2:
        return [mean, mean]
    half = 1.96 * float(np.std(samples, ddof=1)) / np.sqrt(len(samples))
    return [mean - half, mean + half]


def compare_schemes(spec: SignalSpec, config: CoprimeConfig, S: int, trials: int, seed,
                    fixed_jitter: bool = False) -> SchemeComparison:
    """Run ``trials`` independent batches and compare both schemes per lag and in aggregate.

    Aggregate MSE averages the squared error over the trials and the lags
    where both schemes have pairs. ``ci`` holds normal-approximation 95 %
    intervals of the per-trial MSE of each scheme and of their difference
    (non-blind minus blind).
    """
    trials = check_int(trials, "trials", minimum=1)
    S = check_int(S, "S", minimum=1)
    span = config.span
    lags = np.arange(span)
    truth = spec.autocorrelation(lags)
    est_b = np.empty((trials, span))
    est_nb = np.empty((trials, span))
    pairs_b = pairs_nb = None
    for i, ss in enumerate(_seed_sequence(seed).spawn(trials)):
        batch = generate_snapshots(spec, config, S, ss, fixed_jitter=fixed_jitter)
        b = estimate_autocorrelation(batch, "blind")
        nb = estimate_autocorrelation(batch, "nonblind")
        est_b[i], est_nb[i] = b.values, nb.values
        pairs_b, pairs_nb = b.pair_counts, nb.pair_counts

    common = (pairs_b > 0) & (pairs_nb > 0)
    err_b = (est_b - truth) ** 2
    err_nb = (est_nb - truth) ** 2
    trial_b = err_b[:, common].mean(axis=1)
    trial_nb = err_nb[:, common].mean(axis=1)
    return SchemeComparison(
        lags=lags,
        truth=truth,
        mean_blind=est_b.mean(axis=0),
        mean_nonblind=est_nb.mean(axis=0),
        mse_blind_per_lag=err_b.mean(axis=0),
        mse_nonblind_per_lag=err_nb.mean(axis=0),
        pairs_blind=pairs_b,
        pairs_nonblind=pairs_nb,
        mse_blind=float(trial_b.mean()),
        mse_nonblind=float(trial_nb.mean()),
        ci={"blind": _ci95(trial_b), "nonblind": _ci95(trial_nb),
            "difference": _ci95(trial_nb - trial_b)},
        trials=trials,
        snapshots=S,
    )
