"""Self and cross difference sets of a perturbed grid and their distinct-value counts.

Values are kept as integer ticks of ``1/Q`` so that distinctness is exact.
The diagonal of each self-difference matrix (value exactly 0) is stored once
per ``(i, i)`` pair and belongs to both the positive and the negative set of
its sampler.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .core_model import CoprimeConfig, JitterRealization, PerturbedGrid, build_grid


class Kind(str, Enum):
    SELF_M_POS = "SelfM_pos"
    SELF_M_NEG = "SelfM_neg"
    SELF_N_POS = "SelfN_pos"
    SELF_N_NEG = "SelfN_neg"
    CROSS_POS = "Cross_pos"
    CROSS_NEG = "Cross_neg"


class Side(str, Enum):
    M_SIDE = "M_side"
    N_SIDE = "N_side"


_KINDS = list(Kind)
_CODE = {k: i for i, k in enumerate(_KINDS)}
# negative-set partner of each positive self kind, used for diagonal membership
_DIAG_PARTNER = {Kind.SELF_M_POS: Kind.SELF_M_NEG, Kind.SELF_N_POS: Kind.SELF_N_NEG}

SELF_M = frozenset({Kind.SELF_M_POS, Kind.SELF_M_NEG})
SELF_N = frozenset({Kind.SELF_N_POS, Kind.SELF_N_NEG})
SELF_POS = frozenset({Kind.SELF_M_POS, Kind.SELF_N_POS})
SELF_NEG = frozenset({Kind.SELF_M_NEG, Kind.SELF_N_NEG})
SELF = SELF_M | SELF_N
CROSS = frozenset({Kind.CROSS_POS, Kind.CROSS_NEG})
ALL = SELF | CROSS


@dataclass(frozen=True)
class DifferenceEntry:
    """One pairwise difference with the indices that generated it.

    ``(idx_a, idx_b)`` is ``(n1, n2)`` for M-side self differences, ``(m1, m2)``
    for N-side ones and ``(n, m)`` for cross differences.
    """

    ticks: int
    kind: Kind
    idx_a: int
    idx_b: int
    Q: int
    diagonal: bool = False

    @property
    def value(self) -> Fraction:
        return Fraction(self.ticks, self.Q)


@dataclass(frozen=True, eq=False)
class DifferenceSet:
    """Tagged multiset of differences, stored column-wise."""

    config: CoprimeConfig
    ticks: np.ndarray
    kinds: np.ndarray
    idx_a: np.ndarray
    idx_b: np.ndarray
    diagonal: np.ndarray

    def __len__(self) -> int:
        return len(self.ticks)

    def __or__(self, other: "DifferenceSet") -> "DifferenceSet":
        if other.config != self.config:
            raise ValueError("cannot merge difference sets of different configs")
        cat = np.concatenate
        return DifferenceSet(
            self.config,
            cat([self.ticks, other.ticks]),
            cat([self.kinds, other.kinds]),
            cat([self.idx_a, other.idx_a]),
            cat([self.idx_b, other.idx_b]),
            cat([self.diagonal, other.diagonal]),
        )

    @property
    def entries(self) -> list[DifferenceEntry]:
        Q = self.config.Q
        return [
            DifferenceEntry(int(t), _KINDS[k], int(a), int(b), Q, bool(d))
            for t, k, a, b, d in zip(self.ticks, self.kinds, self.idx_a, self.idx_b, self.diagonal)
        ]

    def mask(self, kinds) -> np.ndarray:
        """Boolean membership mask for a kind filter (diagonal counts for pos and neg)."""
        wanted = _normalize_kinds(kinds)
        codes = [_CODE[k] for k in wanted]
        m = np.isin(self.kinds, codes)
        for pos, neg in _DIAG_PARTNER.items():
            if neg in wanted and pos not in wanted:
                m |= self.diagonal & (self.kinds == _CODE[pos])
        return m

    def values(self, kinds=ALL) -> np.ndarray:
        """Tick values of the entries matching ``kinds``."""
        return self.ticks[self.mask(kinds)]

    def count(self, kind) -> int:
        """Number of stored entries tagged exactly ``kind``."""
        return int(np.sum(self.kinds == _CODE[Kind(kind)]))


def _normalize_kinds(kinds) -> frozenset:
    if isinstance(kinds, (Kind, str)):
        kinds = [kinds]
    return frozenset(Kind(k) for k in kinds)


def _empty(n: int):
    return np.empty(n, dtype=np.int64)


def self_differences(grid: PerturbedGrid, which=Side.M_SIDE) -> DifferenceSet:
    """All ordered pairs ``t[i] - t[j]`` of one sub-sampler.

    Pairs with ``i > j`` are tagged positive, ``i < j`` negative, and the
    diagonal is stored once under the positive tag with ``diagonal=True``.
    """
    which = Side(which)
    t1, t2 = grid.ticks()
    if which is Side.M_SIDE:
        t, pos, neg = t1, Kind.SELF_M_POS, Kind.SELF_M_NEG
    else:
        t, pos, neg = t2, Kind.SELF_N_POS, Kind.SELF_N_NEG
    n = len(t)
    ia, ib = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    ia, ib = ia.ravel(), ib.ravel()
    kinds = np.where(ia >= ib, _CODE[pos], _CODE[neg]).astype(np.int8)
    return DifferenceSet(grid.config, t[ia] - t[ib], kinds, ia, ib, ia == ib)


def cross_differences(grid: PerturbedGrid) -> DifferenceSet:
    """``t1[n] - t2[m]`` for every ``(n, m)`` (positive set) and its negation."""
    t1, t2 = grid.ticks()
    n_idx, m_idx = np.meshgrid(np.arange(len(t1)), np.arange(len(t2)), indexing="ij")
    n_idx, m_idx = n_idx.ravel(), m_idx.ravel()
    pos = t1[n_idx] - t2[m_idx]
    k = len(pos)
    kinds = np.concatenate([np.full(k, _CODE[Kind.CROSS_POS]), np.full(k, _CODE[Kind.CROSS_NEG])])
    return DifferenceSet(
        grid.config,
        np.concatenate([pos, -pos]),
        kinds.astype(np.int8),
        np.concatenate([n_idx, n_idx]),
        np.concatenate([m_idx, m_idx]),
        np.zeros(2 * k, dtype=bool),
    )


def difference_set(grid: PerturbedGrid) -> DifferenceSet:
    """Self (both samplers) and cross differences in one set."""
    return (self_differences(grid, Side.M_SIDE)
            | self_differences(grid, Side.N_SIDE)
            | cross_differences(grid))


def distinct_count(dset: DifferenceSet, kinds=ALL) -> int:
    """Number of distinct exact values among the entries matching ``kinds``."""
    return int(np.unique(dset.values(kinds)).size)


# ---------------------------------------------------------------------------
# genericity conditions on the jitter values


class Violation(NamedTuple):
    """A jitter coincidence: the condition broken and the generating indices."""

    condition: str
    indices: tuple

    def to_dict(self) -> dict:
        return {"condition": self.condition, "indices": list(self.indices)}


def _group_collisions(items, condition, out):
    """``items`` maps a key to ``[(value, indices), ...]``; report equal values."""
    for bucket in items.values():
        seen = {}
        for value, idx in bucket:
            if value in seen:
                out.append(Violation(condition, seen[value] + idx))
            else:
                seen[value] = idx


def _band_violations(eps, condition, out):
    bands = defaultdict(list)
    n = len(eps)
    for a in range(n):
        for b in range(a):
            bands[a - b].append((eps[a] - eps[b], (a, b)))
    _group_collisions(bands, condition, out)


def check_genericity(jitter: JitterRealization, config: CoprimeConfig,
                     mode: str = "necessary") -> list[Violation]:
    """Scan the jitter values for coincidences that collapse distinct differences.

    ``mode="sufficient"`` requires every cross jitter difference
    ``d12(n, m) = eps2[m] - eps1[n]`` to be unique in value and in magnitude
    over all index pairs. ``mode="necessary"`` restricts the value check to
    tuples with ``M*(n1-n2) == N*(m1-m2)`` and the magnitude check to tuples
    with ``M*(n1+n2) == N*(m1+m2)``. Both modes also check, exactly:

    * ``delta1_band`` / ``delta2_band``: self jitter differences unique within
      each index band ``n1 - n2 = l``;
    * ``self_overlap``: M-side and N-side self differences at shared multiples
      of ``M*N`` differ;
    * ``cross_zero``: ``d12 != 0`` at the coincident instants;
    * ``prop7_m`` / ``prop7_n``: ``-d12(n, 0) != Delta1(n, 0)`` and
      ``-d12(0, m) != Delta2(0, m)``;
    * ``self_cross_m`` / ``self_cross_n``: no self difference equals a cross
      difference with the same ideal lag (indices ``(a, b, n, m, sign)``).

    Returns the violations sorted by index tuple.
    """
    if mode not in ("sufficient", "necessary"):
        raise ValueError(f"mode must be 'sufficient' or 'necessary', got {mode!r}")
    M, N = config.M, config.N
    e1, e2 = list(jitter.eps1_ticks), list(jitter.eps2_ticks)
    if len(e1) != config.n_first or len(e2) != config.n_second:
        build_grid(config, jitter)  # raises LengthMismatch
    out: list[Violation] = []

    _band_violations(e1, "delta1_band", out)
    _band_violations(e2, "delta2_band", out)

    # self differences coinciding at multiples of MN
    for j in range(1, config.r):
        d1 = {}
        for n2 in range(config.n_first - j * N):
            d1.setdefault(e1[n2 + j * N] - e1[n2], (n2 + j * N, n2))
        for m2 in range(config.n_second - j * M):
            v = e2[m2 + j * M] - e2[m2]
            if v in d1:
                out.append(Violation("self_overlap", d1[v] + (m2 + j * M, m2)))

    tuples = [(n, m) for n in range(config.n_first) for m in range(config.n_second)]
    d12 = {(n, m): e2[m] - e1[n] for n, m in tuples}
    by_lag = defaultdict(list)
    for n, m in tuples:
        by_lag[M * n - N * m].append((d12[n, m], (n, m)))

    if mode == "sufficient":
        _group_collisions({None: [(d12[t], t) for t in tuples]}, "cross_equal", out)
        _group_collisions({None: [(abs(d12[t]), t) for t in tuples]}, "cross_abs_equal", out)
    else:
        _group_collisions(by_lag, "cross_equal", out)
        for lag, bucket in by_lag.items():
            if lag > 0:
                mags = {}
                for v, t in bucket:
                    mags.setdefault(abs(v), []).append(t)
                for v, t in by_lag.get(-lag, []):
                    for t1 in mags.get(abs(v), []):
                        out.append(Violation("cross_abs_equal", t1 + t))
            elif lag == 0:
                _group_collisions({0: [(abs(v), t) for v, t in bucket]}, "cross_abs_equal", out)

    for c in range(config.r):
        if d12[c * N, c * M] == 0:
            out.append(Violation("cross_zero", (c * N, c * M)))

    for n in range(config.n_first):
        if -d12[n, 0] == e1[n] - e1[0]:
            out.append(Violation("prop7_m", (n, 0)))
    for m in range(config.n_second):
        if -d12[0, m] == e2[0] - e2[m]:
            out.append(Violation("prop7_n", (0, m)))

    # self differences versus cross differences sharing an ideal positive lag
    for lag, bucket in by_lag.items():
        if lag == 0:
            continue
        # offset of the cross difference from its ideal integer lag |lag|
        cross = {}
        for v, (n, m) in bucket:
            sign, off = (1, -v) if lag > 0 else (-1, v)
            cross.setdefault(off, []).append((n, m, sign))
        d = abs(lag)
        if d % M == 0 and d // M < config.n_first:
            i = d // M
            for b in range(config.n_first - i):
                for n, m, s in cross.get(e1[b + i] - e1[b], []):
                    out.append(Violation("self_cross_m", (b + i, b, n, m, s)))
        if d % N == 0 and d // N < config.n_second:
            i = d // N
            for b in range(config.n_second - i):
                for n, m, s in cross.get(e2[b + i] - e2[b], []):
                    out.append(Violation("self_cross_n", (b + i, b, n, m, s)))

    out.sort(key=lambda v: (v.indices, v.condition))
    return out


# ---------------------------------------------------------------------------
# distinct-value claims


class ClaimRecord(NamedTuple):
    claim_id: int
    expected: int
    observed: int
    holds: bool

    def to_dict(self) -> dict:
        return {"id": self.claim_id, "expected": self.expected,
                "observed": self.observed, "holds": self.holds}


class Witness(NamedTuple):
    """Two entries with equal value that the claim requires to differ."""

    claim_id: int
    first: tuple
    second: tuple

    def to_dict(self) -> dict:
        return {"claim": self.claim_id, "first": list(self.first), "second": list(self.second)}


@dataclass
class Prop1Report:
    claims: list[ClaimRecord]
    violations: list[Witness] = field(default_factory=list)

    def all_hold(self) -> bool:
        return all(c.holds for c in self.claims)

    def claim(self, claim_id: int) -> ClaimRecord:
        return self.claims[claim_id - 1]

    def to_dict(self) -> dict:
        return {"claims": [c.to_dict() for c in self.claims],
                "violations": [w.to_dict() for w in self.violations]}


def expected_counts(config: CoprimeConfig) -> dict[int, int]:
    """Closed-form distinct-value counts for each claim under generic jitter."""
    rM, rN, r, M, N = config.n_second, config.n_first, config.r, config.M, config.N
    half_n = rN * (rN - 1) // 2
    half_m = rM * (rM - 1) // 2
    return {
        1: half_n + 1,
        2: half_m + 1,
        3: half_m + half_n + 1,
        4: rM * (rM - 1) + rN * (rN - 1) + 1,
        5: r * r * M * N,
        6: 2 * r * r * M * N,
        7: 0,
        8: (rM + rN) * (rM + rN - 1) + 1,
    }


def _entry_key(dset: DifferenceSet, i: int) -> tuple:
    return (_KINDS[dset.kinds[i]].value, int(dset.idx_a[i]), int(dset.idx_b[i]))


def _duplicate_witnesses(dset: DifferenceSet, mask: np.ndarray, claim_id: int) -> list[Witness]:
    idx = np.flatnonzero(mask)
    order = idx[np.lexsort((dset.idx_b[idx], dset.idx_a[idx], dset.kinds[idx], dset.ticks[idx]))]
    out = []
    start = 0
    vals = dset.ticks[order]
    while start < len(order):
        stop = start
        while stop + 1 < len(order) and vals[stop + 1] == vals[start]:
            stop += 1
        if stop > start:
            first = order[start]
            for j in order[start + 1:stop + 1]:
                if dset.diagonal[first] and dset.diagonal[j]:
                    continue
                out.append(Witness(claim_id, _entry_key(dset, first), _entry_key(dset, j)))
        start = stop + 1
    return out


def verify_proposition1(config: CoprimeConfig, jitter: JitterRealization) -> Prop1Report:
    """Enumerate every difference set and compare its distinct count to the closed form.

    Claim 7 is checked by exact intersection of the self and cross value sets;
    it holds when the intersection is empty. Witnesses are collected for every
    failing claim.
    """
    grid = build_grid(config, jitter)
    dset = difference_set(grid)
    expected = expected_counts(config)
    claim_sets = {
        1: frozenset({Kind.SELF_M_POS}),
        2: frozenset({Kind.SELF_N_POS}),
        3: SELF_POS,
        4: SELF,
        5: frozenset({Kind.CROSS_POS}),
        6: CROSS,
        8: ALL,
    }
    observed = {cid: distinct_count(dset, kinds) for cid, kinds in claim_sets.items()}
    self_vals = np.unique(dset.values(SELF))
    cross_vals = np.unique(dset.values(CROSS))
    shared = np.intersect1d(self_vals, cross_vals)
    observed[7] = int(shared.size)

    claims = [ClaimRecord(cid, expected[cid], observed[cid], expected[cid] == observed[cid])
              for cid in range(1, 9)]
    witnesses: list[Witness] = []
    for rec in claims:
        if rec.holds:
            continue
        if rec.claim_id == 7:
            smask = dset.mask(SELF) & np.isin(dset.ticks, shared)
            cmask = dset.mask(CROSS) & np.isin(dset.ticks, shared)
            first_self = {}
            for i in np.flatnonzero(smask):
                first_self.setdefault(int(dset.ticks[i]), i)
            for i in np.flatnonzero(cmask):
                witnesses.append(Witness(7, _entry_key(dset, first_self[int(dset.ticks[i])]),
                                         _entry_key(dset, i)))
        else:
            witnesses.extend(_duplicate_witnesses(dset, dset.mask(claim_sets[rec.claim_id]),
                                                  rec.claim_id))
    witnesses.sort(key=lambda w: (w.claim_id, w.first, w.second))
    return Prop1Report(claims, witnesses)
