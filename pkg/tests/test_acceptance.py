"""Acceptance suite: one test per criterion, each tagged with ``criterion(number, title)``.

A ``criterion N: PASS/FAIL`` line per criterion is printed at the end of the run.
"""
import json
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import FINE_Q, SWEEP_PAIRS, SWEEP_R, WIDE_RHO, generic_seeds
from coprime_jitter import (
    Component,
    JitterRealization,
    SignalSpec,
    additional_contributors,
    build_grid,
    check_genericity,
    compare_schemes,
    complexity_comparison,
    draw_jitter,
    estimate_autocorrelation,
    generate_snapshots,
    validate_config,
    verify_proposition1,
    weight_by_enumeration,
    weight_mapped_blind,
    weight_mapped_nonblind,
)
from coprime_jitter.cli import main

SWEEP = [(M, N, r) for M, N in SWEEP_PAIRS for r in SWEEP_R]


@pytest.mark.criterion(1, "distinct-count closed forms, full sweep x 5 generic seeds, < 10 s")
def test_count_reproduction():
    start = time.perf_counter()
    checked = 0
    for M, N, r in SWEEP:
        config = validate_config(M, N, r, WIDE_RHO, FINE_Q)
        for seed, jitter in generic_seeds(config, 5):
            report = verify_proposition1(config, jitter)
            failing = [c.claim_id for c in report.claims if not c.holds]
            assert not failing, f"{(M, N, r)} seed {seed}: claims {failing}"
            assert report.claim(7).observed == 0
            checked += 1
    elapsed = time.perf_counter() - start
    assert checked == 5 * len(SWEEP)
    assert elapsed < 10.0, f"{elapsed:.1f} s"


@pytest.mark.criterion(2, "clean sufficient check implies every claim, >= 100 seeds at (4,3,3)")
@pytest.mark.parametrize("Q", [2**30, 4096])
def test_sufficiency(Q):
    config = validate_config(4, 3, 3, Fraction(1, 8), Q)
    clean = 0
    for seed in range(120):
        jitter = draw_jitter(config, seed)
        if check_genericity(jitter, config, "sufficient"):
            continue
        clean += 1
        assert verify_proposition1(config, jitter).all_hold(), f"seed {seed}"
    if Q == 2**30:
        # the implication must be exercised, not satisfied vacuously
        assert clean >= 100


@pytest.mark.criterion(3, "ratio-matching collision lowers the cross count and yields a witness")
@pytest.mark.parametrize("M, N, r", [(4, 3, 2), (4, 3, 3), (5, 3, 2)])
def test_adversarial_collision(M, N, r):
    config = validate_config(M, N, r, WIDE_RHO, FINE_Q)
    eps1 = list(draw_jitter(config, 5).eps1_ticks)
    eps2 = list(draw_jitter(config, 5).eps2_ticks)
    # (n1, m1) = (N, M) against (0, 0): M*(n1-n2) == N*(m1-m2)
    eps1[0], eps2[0], eps1[N] = 10, -20, 30
    eps2[M] = eps1[N] + eps2[0] - eps1[0]
    jitter = JitterRealization(eps1, eps2, config.Q)
    grid = build_grid(config, jitter)
    assert grid.t1[N] - grid.t2[M] == grid.t1[0] - grid.t2[0]

    report = verify_proposition1(config, jitter)
    assert report.claim(5).observed < r * r * M * N
    witnesses = [w for w in report.violations if w.claim_id == 5]
    assert witnesses
    assert any(v.condition == "cross_equal" for v in check_genericity(jitter, config, "necessary"))


@pytest.mark.criterion(4, "closed-form mapped weights equal enumeration over the sweep")
def test_weight_oracle_equivalence():
    for M, N, r in SWEEP:
        config = validate_config(M, N, r, Fraction(1, 8), 4096)
        closed = weight_mapped_nonblind(config)
        for seed in range(3):
            grid = build_grid(config, draw_jitter(config, seed))
            assert weight_by_enumeration(grid, "nonblind").same_counts(closed), (M, N, r, seed)
    table = weight_mapped_nonblind(validate_config(4, 3, 3, Fraction(1, 8)))
    anchors = {0: 24, 12: 18, 4: 13, 1: 6, 7: 4, 19: 2}
    assert {lag: table.count(lag) for lag in anchors} == anchors


@pytest.mark.criterion(5, "additional-contributor identity over the sweep")
def test_additional_contributor_identity():
    for M, N, r in SWEEP:
        config = validate_config(M, N, r, 0)
        nb = weight_mapped_nonblind(config).nonnegative()[1]
        b = weight_mapped_blind(config).nonnegative()[1]
        twice = r * r * (2 * M + 2 * N - 1) + r
        assert int((nb - b).sum()) * 2 == twice, (M, N, r)
        assert additional_contributors(config) * 2 == twice
    assert additional_contributors(validate_config(4, 3, 1, 0)) == 7
    assert additional_contributors(validate_config(4, 3, 3, 0)) == 60


@pytest.mark.criterion(6, "complexity deltas equal the additional contributors")
def test_complexity_deltas():
    for M, N, r in SWEEP:
        result = complexity_comparison(validate_config(M, N, r, 0))
        extra = result["additional_contributors"]
        assert result["delta"] == {"C_M": extra, "C_A": extra}, (M, N, r)


CONFIG_433 = validate_config(4, 3, 3, Fraction(1, 8))


@pytest.mark.criterion(7, "estimator properties (a)-(d)")
@pytest.mark.parametrize("scheme, table", [("nonblind", weight_mapped_nonblind),
                                           ("blind", weight_mapped_blind)])
def test_estimator_pair_counts(scheme, table):
    S = 17
    batch = generate_snapshots(SignalSpec([Component(1.0, 0.2)]), CONFIG_433, S, seed=4)
    est = estimate_autocorrelation(batch, scheme)
    assert np.array_equal(est.pair_counts, S * table(CONFIG_433).nonnegative()[1])


@pytest.mark.criterion(7, "estimator properties (a)-(d)")
@pytest.mark.parametrize("scheme", ["nonblind", "blind"])
def test_estimator_constant_signal(scheme):
    batch = generate_snapshots(SignalSpec(dc=-2.5), CONFIG_433, 11, seed=9)
    est = estimate_autocorrelation(batch, scheme)
    filled = est.pair_counts > 0
    rel = np.abs(est.values[filled] - 6.25) / 6.25
    assert rel.max() <= 1e-12


@pytest.mark.criterion(7, "estimator properties (a)-(d)")
def test_estimator_noiseless_sinusoid():
    config = validate_config(4, 3, 3, Fraction(1, 64))
    spec = SignalSpec([Component(1.0, 0.37)])
    est = estimate_autocorrelation(generate_snapshots(spec, config, 500, seed=0), "nonblind")
    filled = est.pair_counts > 0
    err = np.abs(est.values[filled] - spec.autocorrelation(est.lags[filled]))
    assert err.max() <= 0.05, err.max()


@pytest.mark.criterion(7, "estimator properties (a)-(d)")
def test_estimator_monte_carlo_runtime():
    spec = SignalSpec([Component(1.0, 0.37)], noise_sigma=0.1)
    start = time.perf_counter()
    result = compare_schemes(spec, CONFIG_433, 200, 50, seed=0)
    assert time.perf_counter() - start < 60.0
    assert np.isfinite(result.mse_blind) and np.isfinite(result.mse_nonblind)


@pytest.mark.criterion(8, "CLI weight sweep r=1..4 at (4,3): z(0) = 8,16,24,32 and domination")
def test_cli_weight_sweep(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"M": 4, "N": 3, "r": 1, "rho": "1/8"}))
    out = tmp_path / "weights.csv"
    assert main(["weights", "--config", str(cfg), "--scheme", "nonblind",
                 "--sweep", "r=1..4", "--out", str(out)]) == 0
    tables = []
    for r in range(1, 5):
        lines = (tmp_path / f"weights_r{r}.csv").read_text().splitlines()[1:]
        tables.append({int(l.split(",")[0]): int(l.split(",")[1]) for l in lines})
    assert [t[0] for t in tables] == [8, 16, 24, 32]
    for small, large in zip(tables, tables[1:]):
        assert all(large.get(lag, 0) >= z for lag, z in small.items())
