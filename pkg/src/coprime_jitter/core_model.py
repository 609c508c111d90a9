"""Sampler geometry, jitter realizations and perturbed sampling grids.

All instants are measured in units of the Nyquist period. Jitter values are
exact multiples of ``1/Q``; internally every instant is stored as an integer
number of *ticks* (units of ``1/Q``) so that later set-membership tests are
exact integer comparisons.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd
from typing import Sequence

import numpy as np

from ._validation import as_fraction, check_int
from .exceptions import DegenerateGrid, LengthMismatch, NotCoprime, RangeError

DEFAULT_Q = 4096
RHO_LIMIT = Fraction(1, 4)
_TICK_LIMIT = 2**62


@dataclass(frozen=True)
class CoprimeConfig:
    """Validated geometry of a multi-period co-prime sampler.

    Parameters
    ----------
    M, N : int
        Co-prime undersampling factors with ``M > N >= 2``. The first
        sub-sampler fires at ``M*n`` for ``n in [0, r*N)``, the second at
        ``N*m`` for ``m in [0, r*M)``.
    r : int
        Number of co-prime periods in one snapshot.
    rho : Fraction
        Jitter half-range, ``0 <= rho < 1/4``.
    Q : int
        Jitter quantization denominator.
    """

    M: int
    N: int
    r: int
    rho: Fraction
    Q: int = DEFAULT_Q

    def __post_init__(self):
        M = check_int(self.M, "M", minimum=1)
        N = check_int(self.N, "N", minimum=1)
        r = check_int(self.r, "r")
        Q = check_int(self.Q, "Q")
        rho = as_fraction(self.rho, "rho")
        if r < 1:
            raise RangeError(f"r must be >= 1, got {r}")
        if gcd(M, N) != 1:
            raise NotCoprime(f"gcd({M}, {N}) = {gcd(M, N)}")
        if not M > N >= 2:
            raise RangeError(f"expected M > N >= 2, got M={M}, N={N}")
        if not 0 <= rho < RHO_LIMIT:
            raise RangeError(f"rho must lie in [0, 1/4), got {rho}")
        if Q < 4:
            raise RangeError(f"Q must be >= 4, got {Q}")
        if 4 * r * M * N * Q >= _TICK_LIMIT:
            raise RangeError("r*M*N*Q too large for exact 64-bit tick arithmetic")
        for name, value in (("M", M), ("N", N), ("r", r), ("rho", rho), ("Q", Q)):
            object.__setattr__(self, name, value)

    @property
    def n_first(self) -> int:
        """Samples per snapshot on the ``M``-spaced sampler (``r*N``)."""
        return self.r * self.N

    @property
    def n_second(self) -> int:
        """Samples per snapshot on the ``N``-spaced sampler (``r*M``)."""
        return self.r * self.M

    @property
    def span(self) -> int:
        """Snapshot length ``r*M*N``; mapped lags live in ``(-span, span)``."""
        return self.r * self.M * self.N

    @property
    def max_jitter_ticks(self) -> int:
        """Largest ``k`` with ``k/Q`` strictly below ``rho``."""
        return max(ceil(self.rho * self.Q) - 1, 0)

    def replace(self, **changes) -> "CoprimeConfig":
        fields = dict(M=self.M, N=self.N, r=self.r, rho=self.rho, Q=self.Q)
        fields.update(changes)
        return CoprimeConfig(**fields)


def validate_config(M, N, r, rho, Q=DEFAULT_Q) -> CoprimeConfig:
    """Build a :class:`CoprimeConfig`, raising on any invalid field.

    Raises
    ------
    NotCoprime
        If ``gcd(M, N) != 1``.
    RangeError
        If ``rho`` is outside ``[0, 1/4)``, ``r < 1``, ``M <= N`` or ``Q < 4``.
    """
    return CoprimeConfig(M=M, N=N, r=r, rho=rho, Q=Q)


@dataclass(frozen=True)
class JitterRealization:
    """Per-instant jitter of both sub-samplers, stored as integer ticks of ``1/Q``."""

    eps1_ticks: tuple
    eps2_ticks: tuple
    Q: int

    def __post_init__(self):
        object.__setattr__(self, "eps1_ticks", tuple(int(k) for k in self.eps1_ticks))
        object.__setattr__(self, "eps2_ticks", tuple(int(k) for k in self.eps2_ticks))
        object.__setattr__(self, "Q", check_int(self.Q, "Q", minimum=1))

    @classmethod
    def from_values(cls, eps1: Sequence, eps2: Sequence, Q: int) -> "JitterRealization":
        """Build a realization from exact rationals (ints, Fractions or ``"p/q"``)."""
        def ticks(values, name):
            out = []
            for v in values:
                k = as_fraction(v, name) * Q
                if k.denominator != 1:
                    raise RangeError(f"{name} value {v} is not a multiple of 1/{Q}")
                out.append(int(k))
            return out

        return cls(ticks(eps1, "eps1"), ticks(eps2, "eps2"), Q)

    @classmethod
    def zeros(cls, config: CoprimeConfig) -> "JitterRealization":
        return cls((0,) * config.n_first, (0,) * config.n_second, config.Q)

    @property
    def eps1(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(k, self.Q) for k in self.eps1_ticks)

    @property
    def eps2(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(k, self.Q) for k in self.eps2_ticks)

    def is_zero(self) -> bool:
        return not any(self.eps1_ticks) and not any(self.eps2_ticks)


def _draw_ticks(config: CoprimeConfig, rng: np.random.Generator):
    kmax = config.max_jitter_ticks
    if config.rho > 0 and kmax == 0:
        raise DegenerateGrid(
            f"no nonzero multiple of 1/{config.Q} lies strictly inside (-{config.rho}, {config.rho})"
        )
    eps1 = rng.integers(-kmax, kmax + 1, size=config.n_first)
    eps2 = rng.integers(-kmax, kmax + 1, size=config.n_second)
    return eps1, eps2


def draw_jitter(config: CoprimeConfig, seed: int) -> JitterRealization:
    """Draw i.i.d. uniform jitter on the grid points strictly inside ``(-rho, rho)``.

    The first ``r*N`` draws go to the ``M``-spaced sampler, the next ``r*M`` to
    the ``N``-spaced one. ``rho = 0`` yields all zeros.
    """
    rng = np.random.default_rng(seed)
    eps1, eps2 = _draw_ticks(config, rng)
    return JitterRealization(eps1.tolist(), eps2.tolist(), config.Q)


@dataclass(frozen=True)
class PerturbedGrid:
    """Ideal plus jitter sampling instants of both sub-samplers.

    ``t1_ticks[n] = Q*M*n + eps1_ticks[n]`` and ``t2_ticks[m] = Q*N*m + eps2_ticks[m]``.
    """

    config: CoprimeConfig
    jitter: JitterRealization
    t1_ticks: tuple
    t2_ticks: tuple

    @property
    def Q(self) -> int:
        return self.config.Q

    @property
    def t1(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(t, self.Q) for t in self.t1_ticks)

    @property
    def t2(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(t, self.Q) for t in self.t2_ticks)

    def ticks(self) -> tuple[np.ndarray, np.ndarray]:
        """Both tick vectors as ``int64`` arrays."""
        return (np.asarray(self.t1_ticks, dtype=np.int64),
                np.asarray(self.t2_ticks, dtype=np.int64))

    def times(self) -> tuple[np.ndarray, np.ndarray]:
        """Both instant vectors as floats (for signal evaluation only)."""
        t1, t2 = self.ticks()
        return t1 / self.Q, t2 / self.Q


def build_grid(config: CoprimeConfig, jitter: JitterRealization) -> PerturbedGrid:
    """Place the jittered instants of both sub-samplers on the exact tick grid.

    Raises
    ------
    LengthMismatch
        If the jitter arrays do not have ``r*N`` and ``r*M`` entries.
    RangeError
        If the jitter uses a different ``Q`` or has an entry outside ``(-rho, rho)``.
    """
    if len(jitter.eps1_ticks) != config.n_first or len(jitter.eps2_ticks) != config.n_second:
        raise LengthMismatch(
            f"expected {config.n_first} + {config.n_second} jitter values, got "
            f"{len(jitter.eps1_ticks)} + {len(jitter.eps2_ticks)}"
        )
    if jitter.Q != config.Q:
        raise RangeError(f"jitter quantized on 1/{jitter.Q}, config expects 1/{config.Q}")
    kmax = config.max_jitter_ticks
    for k in jitter.eps1_ticks + jitter.eps2_ticks:
        if abs(k) > kmax:
            raise RangeError(f"jitter {Fraction(k, config.Q)} outside (-{config.rho}, {config.rho})")
    step1 = config.Q * config.M
    step2 = config.Q * config.N
    t1 = tuple(step1 * n + e for n, e in enumerate(jitter.eps1_ticks))
    t2 = tuple(step2 * m + e for m, e in enumerate(jitter.eps2_ticks))
    return PerturbedGrid(config, jitter, t1, t2)


def ideal_grid(config: CoprimeConfig) -> PerturbedGrid:
    return build_grid(config, JitterRealization.zeros(config))
