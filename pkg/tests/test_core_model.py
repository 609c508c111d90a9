from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coprime_jitter import (
    CoprimeConfig,
    DegenerateGrid,
    JitterRealization,
    LengthMismatch,
    NotCoprime,
    RangeError,
    build_grid,
    draw_jitter,
    validate_config,
)

COPRIME_PAIRS = [(3, 2), (4, 3), (5, 2), (5, 3), (5, 4), (7, 2), (7, 3), (7, 5), (8, 3), (9, 7)]


def test_validate_running_example():
    config = validate_config(4, 3, 3, "1/8", 4096)
    assert (config.M, config.N, config.r, config.rho, config.Q) == (4, 3, 3, Fraction(1, 8), 4096)
    assert config.n_first == 9 and config.n_second == 12 and config.span == 36


@pytest.mark.parametrize("args, exc", [
    ((4, 2, 1, Fraction(1, 8), 4096), NotCoprime),
    ((6, 4, 1, 0, 4096), NotCoprime),
    ((4, 3, 1, Fraction(1, 4), 4096), RangeError),
    ((4, 3, 1, Fraction(-1, 8), 4096), RangeError),
    ((4, 3, 0, 0, 4096), RangeError),
    ((3, 4, 1, 0, 4096), RangeError),
    ((3, 1, 1, 0, 4096), RangeError),
    ((4, 3, 1, 0, 3), RangeError),
])
def test_validate_rejects(args, exc):
    with pytest.raises(exc):
        validate_config(*args)


def test_rho_parsing_refuses_floats():
    with pytest.raises(ValueError):
        validate_config(4, 3, 1, 0.125, 4096)
    assert validate_config(4, 3, 1, "3/32").rho == Fraction(3, 32)


def test_draw_jitter_contract():
    config = validate_config(4, 3, 3, Fraction(1, 8), 4096)
    a = draw_jitter(config, 7)
    b = draw_jitter(config, 7)
    assert a == b
    assert len(a.eps1) == 9 and len(a.eps2) == 12
    assert all(abs(v) < Fraction(1, 8) for v in a.eps1 + a.eps2)
    assert all(v.denominator in (1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096)
               for v in a.eps1 + a.eps2)


def test_draw_jitter_rho_zero_is_ideal():
    config = validate_config(4, 3, 1, 0, 4096)
    jitter = draw_jitter(config, 123)
    assert jitter.is_zero()


def test_draw_jitter_seed_sensitivity():
    config = validate_config(4, 3, 2, Fraction(1, 8), 4096)
    assert draw_jitter(config, 1) != draw_jitter(config, 2)


def test_degenerate_grid():
    config = validate_config(4, 3, 1, Fraction(1, 8), 8)
    with pytest.raises(DegenerateGrid):
        draw_jitter(config, 0)


def test_build_grid_ideal_prototype():
    config = validate_config(4, 3, 1, 0)
    grid = build_grid(config, JitterRealization.zeros(config))
    assert grid.t1 == (0, 4, 8)
    assert grid.t2 == (0, 3, 6, 9)


def test_build_grid_coincidences():
    config = validate_config(4, 3, 3, 0)
    grid = build_grid(config, JitterRealization.zeros(config))
    assert len(grid.t1) == 9 and grid.t1[-1] == 32
    assert len(grid.t2) == 12 and grid.t2[-1] == 33
    assert sorted(set(grid.t1) & set(grid.t2)) == [0, 12, 24]
    for c in range(3):
        assert grid.t1[c * 3] == grid.t2[c * 4] == c * 12


def test_build_grid_exact_jitter():
    config = validate_config(4, 3, 1, Fraction(1, 5), 4096)
    jitter = JitterRealization.from_values([0, Fraction(1, 8), 0], [0] * 4, 4096)
    assert build_grid(config, jitter).t1[1] == Fraction(33, 8)


def test_build_grid_errors():
    config = validate_config(4, 3, 1, Fraction(1, 8), 4096)
    with pytest.raises(LengthMismatch):
        build_grid(config, JitterRealization((0, 0), (0, 0, 0, 0), 4096))
    with pytest.raises(RangeError):
        build_grid(config, JitterRealization.from_values([Fraction(1, 8), 0, 0], [0] * 4, 4096))
    with pytest.raises(RangeError):
        JitterRealization.from_values([Fraction(1, 3)], [], 4096)


def test_config_is_immutable():
    config = validate_config(4, 3, 1, 0)
    with pytest.raises(AttributeError):
        config.M = 5
    assert isinstance(config, CoprimeConfig)


@settings(max_examples=60, deadline=None)
@given(pair=st.sampled_from(COPRIME_PAIRS), r=st.integers(1, 4),
       rho_num=st.integers(0, 63), seed=st.integers(0, 2**32 - 1))
def test_grid_strictly_increasing_and_exact(pair, r, rho_num, seed):
    M, N = pair
    config = validate_config(M, N, r, Fraction(rho_num, 256), 4096)
    grid = build_grid(config, draw_jitter(config, seed))
    t1, t2 = grid.ticks()
    assert np.all(np.diff(t1) > 0) and np.all(np.diff(t2) > 0)
    # differences are integer + k/Q
    for a, b in zip(grid.t1, grid.t1[1:]):
        assert ((b - a) * config.Q).denominator == 1
    if rho_num == 0:
        assert all(v.denominator == 1 for v in grid.t1 + grid.t2)
