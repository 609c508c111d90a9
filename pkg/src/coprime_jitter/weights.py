"""Weight functions: number of sample pairs contributing to each lag.

Counting convention shared by every table here: a pair ``(a, b)`` with
``t_a - t_b`` mapped to ``l != 0`` is an ordered pair and its reverse lands on
``-l``. At ``l = 0`` each self pair ``(a, a)`` and each unordered pair of
distinct (near-)coincident samples is counted once. Mapping sends a jittered
difference in ``[l - 1/2, l + 1/2)`` to the integer ``l``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import ceil, floor
from typing import NamedTuple

import numpy as np

from ._validation import check_scheme
from .core_model import CoprimeConfig, PerturbedGrid
from .difference_analysis import check_genericity
from .exceptions import NonIntegerResult


class Scheme(str, Enum):
    UNMAPPED_JITTERED = "UnmappedJittered"
    MAPPED_BLIND = "MappedBlind"
    MAPPED_NONBLIND = "MappedNonBlind"
    ENUMERATION_ORACLE = "EnumerationOracle"


class FormulaGap(NamedTuple):
    """A lag whose closed-form value was not taken from the written band formulas.

    ``reason`` is ``"uncovered"`` (no band applies), ``"overlap"`` (several
    bands with different values apply) or ``"conflict"`` (the formula value
    disagrees with the exact lattice count). ``value`` is the count used.
    """

    lag: int
    reason: str
    formula_values: tuple
    value: int


@dataclass(frozen=True, eq=False)
class WeightTable:
    """Contributor count per lag.

    Mapped tables cover every integer lag in ``[-(r*M*N - 1), r*M*N - 1]``,
    including lags with no contributors. Unmapped tables list each distinct
    exact lag (as :class:`~fractions.Fraction`) that occurs.
    """

    lags: np.ndarray
    counts: np.ndarray
    scheme: Scheme
    config: CoprimeConfig
    variant: str | None = None
    degenerate: bool = False
    gaps: tuple = field(default=())

    def __len__(self) -> int:
        return len(self.lags)

    def count(self, lag) -> int:
        """Contributors at ``lag`` (0 if the lag does not occur)."""
        hits = np.flatnonzero(self.lags == lag)
        return int(self.counts[hits[0]]) if hits.size else 0

    def nonnegative(self) -> tuple[np.ndarray, np.ndarray]:
        """Lags ``0 .. r*M*N - 1`` and their counts (mapped tables)."""
        keep = self.lags >= 0
        return self.lags[keep], self.counts[keep]

    def as_dict(self) -> dict:
        return {lag: int(c) for lag, c in zip(self.lags.tolist(), self.counts.tolist())}

    def same_counts(self, other: "WeightTable") -> bool:
        return (len(self) == len(other)
                and bool(np.all(self.lags == other.lags))
                and bool(np.all(self.counts == other.counts)))


def _mapped_lags(diff_ticks: np.ndarray, Q: int) -> np.ndarray:
    # floor(d/Q + 1/2) in exact integer arithmetic
    return np.floor_divide(2 * diff_ticks + Q, 2 * Q)


def _pair_histogram(lag_matrix: np.ndarray, span: int) -> tuple[np.ndarray, np.ndarray]:
    n = lag_matrix.shape[0]
    upper = np.triu(np.ones((n, n), dtype=bool))
    keep = (lag_matrix != 0) | upper
    lags = lag_matrix[keep]
    if lags.size and np.abs(lags).max() >= span:
        raise AssertionError("pair difference outside the snapshot span")
    counts = np.bincount(lags + span - 1, minlength=2 * span - 1)
    return np.arange(-(span - 1), span, dtype=np.int64), counts.astype(np.int64)


def _all_ticks(grid: PerturbedGrid) -> np.ndarray:
    t1, t2 = grid.ticks()
    return np.concatenate([t1, t2])


def weight_unmapped(grid: PerturbedGrid) -> WeightTable:
    """Contributors per exact (unmapped) lag of the jittered grid.

    With generic jitter every nonzero lag has exactly one contributor and lag 0
    has ``r*M + r*N``. ``degenerate`` is set when the necessary genericity
    check reports violations.
    """
    t = _all_ticks(grid)
    diff = t[:, None] - t[None, :]
    n = len(t)
    keep = (diff != 0) | np.triu(np.ones((n, n), dtype=bool))
    values, counts = np.unique(diff[keep], return_counts=True)
    Q = grid.Q
    lags = np.array([Fraction(int(v), Q) for v in values], dtype=object)
    degenerate = bool(check_genericity(grid.jitter, grid.config, "necessary"))
    return WeightTable(lags, counts.astype(np.int64), Scheme.UNMAPPED_JITTERED, grid.config,
                       degenerate=degenerate)


def blind_instants(config: CoprimeConfig) -> np.ndarray:
    """Ideal integer instants kept by the blind scheme.

    All ``M*n`` instants plus the ``N*m`` instants with ``m`` not a multiple
    of ``M``; the N-side copy of each coincident instant ``c*M*N`` is dropped.
    """
    first = config.M * np.arange(config.n_first, dtype=np.int64)
    m = np.arange(config.n_second, dtype=np.int64)
    second = config.N * m[m % config.M != 0]
    return np.concatenate([first, second])


def weight_mapped_blind(config: CoprimeConfig) -> WeightTable:
    """Blind weights: enumeration over the ideal grid with coincidences deduplicated."""
    t = blind_instants(config)
    lags, counts = _pair_histogram(t[:, None] - t[None, :], config.span)
    return WeightTable(lags, counts, Scheme.MAPPED_BLIND, config)


def weight_by_enumeration(grid: PerturbedGrid, scheme: str = "nonblind") -> WeightTable:
    """Brute-force weights over every ordered sample pair.

    ``nonblind`` maps each true jittered difference of all ``r*M + r*N``
    samples to its nearest integer lag; ``blind`` pairs the ideal instants with
    the coincident duplicates removed, ignoring the jitter.
    """
    check_scheme(scheme)
    config = grid.config
    if scheme == "nonblind":
        t = _all_ticks(grid)
        lag_matrix = _mapped_lags(t[:, None] - t[None, :], config.Q)
    else:
        t = blind_instants(config)
        lag_matrix = t[:, None] - t[None, :]
    lags, counts = _pair_histogram(lag_matrix, config.span)
    return WeightTable(lags, counts, Scheme.ENUMERATION_ORACLE, config, variant=scheme)


# ---------------------------------------------------------------------------
# closed form for the mapped non-blind weights


def cross_lattice_count(config: CoprimeConfig, lag: int) -> int:
    """Number of index pairs ``(n, m)`` in range with ``M*n - N*m == lag``.

    Solutions form the lattice ``(n0 + k*N, m0 + k*M)``; ``n0 < N`` forces
    ``k in [0, r-1]`` and the ``m`` range trims it further.
    """
    M, N, r = config.M, config.N, config.r
    n0 = (lag * pow(M, -1, N)) % N
    m0 = (M * n0 - lag) // N
    k_lo = max(0, -(m0 // M))
    k_hi = min(r - 1, (config.n_second - 1 - m0) // M)
    return max(0, k_hi - k_lo + 1)


def _self_count(config: CoprimeConfig, lag: int) -> int:
    lag = abs(lag)
    total = 0
    if lag % config.M == 0 and lag // config.M < config.n_first:
        total += config.n_first - lag // config.M
    if lag % config.N == 0 and lag // config.N < config.n_second:
        total += config.n_second - lag // config.N
    return total


def _exact_nonblind(config: CoprimeConfig, lag: int) -> int:
    cross = cross_lattice_count(config, lag) + cross_lattice_count(config, -lag)
    if lag == 0:
        # the two orientations of each coincident cross pair count once
        return _self_count(config, 0) + cross // 2
    return _self_count(config, lag) + cross


def _band_values(config: CoprimeConfig, lag: int) -> list[int]:
    M, N, r = config.M, config.N, config.r
    a = abs(lag)
    values = []
    if a <= M * N - M - N:
        values.append(2 * r)
    for i in range(1, r):
        if (i * N + 1) * M - (M - 1) * N <= a <= ((i + 1) * N - 1) * M - N:
            values.append(2 * (r - i))
    return values


def _formula_value(config: CoprimeConfig, lag: int):
    """Written closed form at a nonnegative lag, or the list of band candidates."""
    M, N, r = config.M, config.N, config.r
    MN = M * N
    if lag == 0:
        return r * M + r * N + r
    if lag % MN == 0:
        c = lag // MN
        return (r - c) * M + (r - c) * N + 2 * (r - c)
    if lag % M == 0:
        i = lag // M
        return (r * N - i) + (r - floor(i / N)) + (r - ceil(i / N))
    if lag % N == 0:
        i = lag // N
        return (r * M - i) + (r - floor(i / M)) + (r - ceil(i / M))
    return _band_values(config, lag)


def weight_mapped_nonblind(config: CoprimeConfig) -> WeightTable:
    """Closed-form mapped weights of the non-blind scheme.

    Multiples of ``M*N``, of ``M`` and of ``N`` use their closed forms. A lag
    that is a multiple of neither ``M`` nor ``N`` takes the band value
    ``2*r`` (central band) or ``2*(r - i)`` (band ``i``) when exactly one band
    value applies and the lag is a cross difference at all. Lags where the
    bands leave a gap, overlap with different values, or disagree with the
    exact lattice count of cross pairs are filled with that lattice count and
    listed in :attr:`WeightTable.gaps`. The table does not depend on any jitter
    realization.
    """
    span = config.span
    positive = np.zeros(span, dtype=np.int64)
    gaps = []
    for lag in range(span):
        exact = _exact_nonblind(config, lag)
        formula = _formula_value(config, lag)
        if isinstance(formula, list):
            distinct = tuple(sorted(set(formula)))
            if exact == 0 or distinct == (exact,):
                # exact == 0: not a cross difference, the bands do not apply
                value = exact
            else:
                reason = ("uncovered" if not distinct
                          else "overlap" if len(distinct) > 1 else "conflict")
                gaps.append(FormulaGap(lag, reason, distinct, exact))
                value = exact
        elif formula != exact:
            gaps.append(FormulaGap(lag, "conflict", (formula,), exact))
            value = exact
        else:
            value = formula
        positive[lag] = value
    counts = np.concatenate([positive[:0:-1], positive])
    lags = np.arange(-(span - 1), span, dtype=np.int64)
    return WeightTable(lags, counts, Scheme.MAPPED_NONBLIND, config, gaps=tuple(gaps))


def additional_contributors(config: CoprimeConfig) -> int:
    """Extra contributors of the non-blind scheme over lags ``0 .. r*M*N - 1``.

    Closed form ``r**2 * (2*M + 2*N - 1) / 2 + r / 2``.
    """
    r = config.r
    twice = r * r * (2 * config.M + 2 * config.N - 1) + r
    if twice % 2:
        raise NonIntegerResult(f"closed form gives {twice}/2 for {config}")
    return twice // 2
