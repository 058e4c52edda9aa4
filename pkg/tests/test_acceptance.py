"""Acceptance criteria, one test per criterion at its stated tolerance.

Each test records a pass/fail line that is printed in the terminal summary
under "acceptance criteria". Run just this module with

    pytest tests/test_acceptance.py -v
"""
import math
import time

import numpy as np
import pytest

from locgame import exact, harness, theory
from locgame.cli import main
from locgame.graph import (
    GnpParams, complete_graph, path_graph, sample_gnp, star_graph,
)
from locgame.harness import ExperimentConfig, estimate_zeta
from locgame.rng import derive

SIZES = (128, 256, 512)


@pytest.fixture(scope="module")
def dense_estimates():
    """zeta_hat for G(n, 1/2), random-set cop vs greedy adversary, 20 rounds."""
    start = time.perf_counter()
    out = {}
    for n in SIZES:
        cfg = ExperimentConfig(n=n, p=0.5, seed=2024, trials=200, rounds=20,
                               cop="random-set", robber="greedy-adversary")
        out[n] = estimate_zeta(cfg)[0]
    return out, time.perf_counter() - start


def test_criterion_01_dense_estimate(dense_estimates, acceptance_record):
    est, elapsed = dense_estimates
    parts, ok = [], True
    for n in SIZES:
        lo, hi = 0.6 * 2 * math.log2(n), 1.3 * 2 * math.log2(n)
        z = est[n]
        inside = z is not None and lo <= z <= hi
        ok &= inside
        parts.append(f"n={n} zeta_hat={z} in [{lo:.1f}, {hi:.1f}]")
    ok &= elapsed < 120
    acceptance_record(1, ok, "; ".join(parts) + f"; {elapsed:.1f}s")
    assert ok


def test_criterion_02_window(dense_estimates, acceptance_record):
    est, _ = dense_estimates
    w = theory.zeta_window(theory.derive_params(512, 0.5), c=0.9)
    z = est[512]
    ok = w.lower < w.upper and z is not None and z <= w.upper + 3
    acceptance_record(2, ok, f"lower={w.lower:.3f} upper={w.upper:.3f} zeta_hat={z} "
                             f"(c within range: {w.c_in_range})")
    assert ok


def test_criterion_03_exact_oracles(acceptance_record):
    start = time.perf_counter()
    checks = {}
    for n in (3, 4, 5):
        checks[f"zeta(K_{n})"] = exact.localization_number(complete_graph(n)) == n - 1
    for n in range(1, 9):
        checks[f"zeta(P_{n})"] = exact.localization_number(path_graph(n)) == 1
    for n in range(2, 9):
        checks[f"beta(P_{n})"] = exact.metric_dimension(path_graph(n)) == 1
    checks["zeta(K_1,3)"] = exact.localization_number(star_graph(3)) == 1
    checks["beta(K_4)"] = exact.metric_dimension(complete_graph(4)) == 3
    graphs = [sample_gnp(GnpParams(7, 0.5, derive(77, j))) for j in range(50)]
    checks["zeta<=beta on 50 G(7,1/2)"] = all(exact.zeta_leq_beta_check(g) for g in graphs)
    elapsed = time.perf_counter() - start
    bad = [name for name, v in checks.items() if not v]
    ok = not bad and elapsed < 60
    acceptance_record(3, ok, f"{len(checks) - len(bad)}/{len(checks)} exact identities; "
                             f"{elapsed:.1f}s" + (f"; failed {bad}" if bad else ""))
    assert ok


def test_criterion_04_upper_strategy(acceptance_record):
    cfg = ExperimentConfig(n=512, p=0.5, seed=4, trials=200, rounds=20)
    row = harness.run_trials(cfg, 18)
    ok = row.win_rate >= 0.9
    acceptance_record(4, ok, f"k=18 win_rate={row.win_rate:.3f} over {row.trials} fresh graphs")
    assert ok


def test_criterion_05_lower_certificate(acceptance_record):
    res = harness.check_lemma6_positivity(512, 0.5, 9, graphs=10, pairs=100, seed=5)
    ok = res.samples == 100 and res.successes == 100
    acceptance_record(5, ok, f"{res.successes}/{res.samples} pairs with X>0 "
                             f"(smallest X={res.statistic:g})")
    assert ok


def test_criterion_06_collision_rate(acceptance_record):
    res = harness.check_collision_rate(0.5, 10, 10**6, seed=6)
    rho_k = 2.0 ** -10
    sigma = math.sqrt(rho_k * (1 - rho_k) / 10**6)
    z = (res.statistic - rho_k) / sigma
    ok = abs(z) <= 4
    acceptance_record(6, ok, f"frequency={res.statistic:.6g} vs 2^-10={rho_k:.6g} ({z:+.2f} sigma)")
    assert ok


def test_criterion_07_lemma3_sweep(acceptance_record):
    ps = np.linspace(0.0, 1.0, 100_002)[1:-1]
    holds, ratios = zip(*(theory.lemma3_check(float(p)) for p in ps))
    ok = all(holds) and min(ratios) >= 1.5 - 1e-12
    acceptance_record(7, ok, f"{len(ps)} points, all hold={all(holds)}, min ratio={min(ratios):.12f}")
    assert ok


def test_criterion_08_union_exponent(acceptance_record):
    grid = np.geomspace(20, 60, 41)
    ex = np.array([theory.lemma6_quantities(math.exp(ln), 0.5).union_exponent for ln in grid])
    decreasing = bool(np.all(np.diff(ex) < 0))
    neg = np.nonzero(ex >= 0)[0]
    first_neg = 0 if neg.size == 0 else int(neg[-1]) + 1
    negative_tail = first_neg < len(grid)
    ps = np.linspace(0, 1, 10_001)[1:-1]
    rho = np.array([theory.derive_params(1e6, float(p)).rho for p in ps])
    identity = float(np.max(np.abs(rho - (1 - 2 * ps * (1 - ps)))))
    ok = decreasing and negative_tail and identity <= 1e-12
    where = f"ln n>={grid[first_neg]:.2f}" if negative_tail else "never"
    acceptance_record(8, ok, f"strictly decreasing={decreasing}; negative for {where}; "
                             f"max rho identity error={identity:.1e}")
    assert ok


def test_criterion_09a_diameter(acceptance_record):
    n = 500
    p = harness.diameter_threshold_p(n)
    res = harness.check_diameter_rate(n, p, samples=100, seed=9)
    ok = res.successes >= 99
    acceptance_record("9a", ok, f"G({n}, {p:.4f}): diameter <= 2 in {res.successes}/100 (need 99)")
    assert ok


def test_criterion_09b_concentration(acceptance_record):
    res = harness.check_concentration_rate(1000, 0.5, samples=100, constant=3.0, seed=9)
    ok = res.successes >= 99
    acceptance_record("9b", ok, f"G(1000, 0.5): degree/codegree within constant 3 in "
                                f"{res.successes}/100")
    assert ok


def _repeat(argv, tmp_path, tag, times=3):
    paths = []
    for i in range(times):
        path = tmp_path / f"{tag}{i}"
        code = main([*argv, "--out", str(path)])
        assert code in (0, 1)
        paths.append(path.read_bytes())
    return paths


def test_criterion_10_determinism(tmp_path, acceptance_record):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 128\np = 0.5\nseed = 10\ntrials = 40\nk_max = 30\n"
                   "cert_graphs = 3\ncert_pairs = 30\nconc_samples = 5\n"
                   "diameter_samples = 5\ncollision_samples = 100000\nbeta_graphs = 5\n")
    results = {}
    for fmt in ("csv", "json"):
        for workers in ("1", "3"):
            results[f"estimate/{fmt}/w{workers}"] = _repeat(
                ["estimate", "--config", str(cfg), "--format", fmt, "--workers", workers],
                tmp_path, f"e{fmt}{workers}")
        results[f"verify/{fmt}"] = _repeat(["verify", "--config", str(cfg), "--format", fmt],
                                           tmp_path, f"v{fmt}")
    same = {k: len(set(v)) == 1 for k, v in results.items()}
    across = all(results[f"estimate/{f}/w1"][0] == results[f"estimate/{f}/w3"][0]
                 for f in ("csv", "json"))
    ok = all(same.values()) and across
    acceptance_record(10, ok, f"{len(results)} invocations x3 byte-identical={all(same.values())}; "
                              f"serial == 3 workers: {across}")
    assert ok
