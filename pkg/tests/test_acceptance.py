"""Exit criteria. Each test records one PASS/FAIL line, printed in the pytest
terminal summary (or directly when run as ``python tests/test_acceptance.py``)."""

import time
from fractions import Fraction

import numpy as np
import pytest

from coopsense.algorithms import (
    brute_force_opt,
    max_weight_matching,
    CopyGraph,
    mgdy_assign,
    mwm_assign,
)
from coopsense.harness import default_spec, emit, run_sweep
from coopsense.scenarios import reduction_instance
from coopsense.sensing import Scenario, channel_throughput, single_su_throughput
from conftest import make_scenario, random_instance
from oracles import matching_oracle

RESULTS: list[str] = []


def record(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_ac1_single_su_bounds_and_closed_form():
    rng = np.random.default_rng(1)
    m, n = 1000, 10
    sc = Scenario.from_arrays(rng.uniform(0, 1, m), rng.uniform(0, 3, m),
                              rng.random((n, m)), rng.random((n, m)), [1] * n, t_c=0.2)
    start = time.perf_counter()
    worst_gap, exact = 0.0, True
    for k in range(m):
        t1, t2 = float(sc.theta1[k]), float(sc.theta2[k])
        for i in range(n):
            u = channel_throughput((i,), k, sc)
            exact &= u == single_su_throughput(i, k, sc)
            worst_gap = max(worst_gap, max(t1, t2) - u, u - (t1 + t2))
    elapsed = time.perf_counter() - start
    ok = exact and worst_gap <= 1e-12 and elapsed < 1.0
    record("AC1 single-SU bounds + closed form on 10^4 singletons", ok,
           f"exact={exact}, worst bound violation={worst_gap:.2e} (tol 1e-12), {elapsed:.2f}s (< 1s)")


def test_ac2_monotone_and_coin_flip_neutral():
    rng = np.random.default_rng(2)
    m, n = 1000, 8
    pf, pm = rng.random((n + 1, m)), rng.random((n + 1, m))
    pf[n], pm[n] = 0.5, 0.5  # the last SU flips coins everywhere
    sc = Scenario.from_arrays(rng.uniform(0, 1, m), rng.uniform(0, 3, m), pf, pm, [1] * (n + 1), t_c=0.2)
    start = time.perf_counter()
    worst_drop, worst_coin = 0.0, 0.0
    for k in range(m):
        size = int(rng.integers(0, 7))
        base = set(rng.choice(n, size, replace=False).tolist())
        extra = int(rng.choice([i for i in range(n) if i not in base]))
        u = channel_throughput(base, k, sc)
        worst_drop = max(worst_drop, u - channel_throughput(base | {extra}, k, sc))
        if base:
            worst_coin = max(worst_coin, abs(channel_throughput(base | {n}, k, sc) - u))
    elapsed = time.perf_counter() - start
    ok = worst_drop <= 1e-12 and worst_coin <= 1e-12 and elapsed < 5.0
    record("AC2 monotonicity + coin-flip neutrality on 10^3 sets", ok,
           f"max decrease={worst_drop:.2e}, max coin-flip change={worst_coin:.2e} (tol 1e-12), {elapsed:.2f}s (< 5s)")


def test_ac3_reduction_closed_form_and_split():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 9))
        pm = rng.uniform(0, 1, n)
        theta = float(rng.uniform(0.05, 0.7))
        sc = make_scenario([(theta, theta)], np.zeros((n, 1)), pm[:, None])
        t1, t2 = float(sc.theta1[0]), float(sc.theta2[0])
        worst = max(worst, abs(channel_throughput(range(n), 0, sc) - (t1 + t2 * (1 - np.prod(pm)))))
    inst = reduction_instance([1, 4, 2, 2], theta=0.4)
    res = brute_force_opt(inst.scenario)
    split = {tuple(sorted(s)) for s in res.assignment.sets}
    product_sum = inst.product_sum(sorted(res.assignment.sets[0]))
    ok = worst <= 1e-12 and split == {(0, 1), (2, 3)} and product_sum == Fraction(8, 100)
    record("AC3 product-form throughput + reduction split", ok,
           f"max closed-form error={worst:.2e} (tol 1e-12), split={sorted(split)} (a-values "
           f"{{1,4}}|{{2,2}}), product sum={product_sum}")


def _ac4_instances(count):
    rng = np.random.default_rng(4)
    out = []
    while len(out) < count:
        n, m = int(rng.integers(1, 7)), int(rng.integers(1, 5))
        budgets = rng.integers(1, 3, n).clip(max=m)
        if budgets.sum() < m:  # the guarantee assumes sum(l_i) >= M
            continue
        out.append(random_instance(rng, n, m, budgets))
    return out


def test_ac4_approximation_chain():
    start = time.perf_counter()
    failures = []
    for idx, sc in enumerate(_ac4_instances(200)):
        opt = brute_force_opt(sc).value
        alg = mwm_assign(sc).value
        gdy, report = mgdy_assign(sc)
        floor = report.mu * report.u0.sum()
        checks = {
            "OPT>=ALG": opt >= alg - 1e-12,
            "ALG>=MGdy": alg >= gdy.value - 1e-9,
            "MGdy>=mu*sumU0": gdy.value >= floor - 1e-9,
            "ALG>=mu/2*OPT": alg >= report.mu / 2 * opt - 1e-9,
            "sumU0>=half bound": report.u0.sum() >= 0.5 * sc.upper_bound() - 1e-9,
        }
        failures += [(idx, name) for name, good in checks.items() if not good]
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120
    record("AC4 OPT >= ALG >= |M_Gdy| >= mu*sum U0, ALG >= mu/2*OPT on 200 instances", ok,
           f"violations={failures[:5]}, {elapsed:.1f}s (< 120s)")


def test_ac5_matching_exactness():
    rng = np.random.default_rng(5)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        rows, cols = rng.integers(1, 9, 2)
        w = rng.random((rows, cols)) * rng.choice([1.0, 10.0])
        graph = CopyGraph(tuple((r, 0) for r in range(rows)), w)
        got = sum(w[copy[0], k] for copy, k in max_weight_matching(graph))
        want = matching_oracle(w)
        worst = max(worst, abs(got - want) / max(want, 1.0))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 30
    record("AC5 matching = exhaustive enumeration on 500 graphs", ok,
           f"max relative difference={worst:.2e} (float rounding only, tol 1e-12), {elapsed:.1f}s (< 30s)")


@pytest.mark.slow
def test_ac6_figure_trend_vary_n(tmp_path):
    start = time.perf_counter()
    spec = default_spec("vary-N")
    rows = run_sweep(spec)
    elapsed = time.perf_counter() - start
    emit(rows, tmp_path, name=spec.kind, xlabel=spec.axis_name)
    beats = all(r.mwm_mean >= r.greedy_mean and r.mwm_mean >= r.random_mean for r in rows)
    bounded = all(max(r.mwm_mean, r.greedy_mean, r.random_mean) <= r.upper_bound for r in rows)
    inversions = [(a.swept_value, b.swept_value, a.mwm_mean - b.mwm_mean, max(a.mwm_std, b.mwm_std))
                  for a, b in zip(rows, rows[1:]) if b.mwm_mean < a.mwm_mean]
    trend = len(inversions) <= 1 and all(drop <= std for *_, drop, std in inversions)
    ok = beats and bounded and trend and elapsed < 600
    means = ", ".join(f"N={r.swept_value}: {r.mwm_mean:.3f}/{r.greedy_mean:.3f}/{r.random_mean:.3f}"
                      for r in rows)
    record("AC6 vary-N trend (mwm/greedy/random means)", ok,
           f"{means}; mwm wins everywhere={beats}, inversions={inversions}, below bound={bounded}, "
           f"{elapsed:.0f}s (< 600s)")


@pytest.mark.parametrize("kind", ["vary-N", "vary-lmax", "vary-gamma-range"])
def test_ac7_determinism(tmp_path, kind):
    spec = default_spec(kind, runs=10, base_seed=123)
    emit(run_sweep(spec), tmp_path / "a", name=kind, plot=False)
    emit(run_sweep(spec), tmp_path / "b", name=kind, plot=False)
    a = (tmp_path / "a" / f"{kind}.csv").read_bytes()
    b = (tmp_path / "b" / f"{kind}.csv").read_bytes()
    record(f"AC7 byte-identical CSV on rerun ({kind})", a == b, f"{len(a)} bytes, identical={a == b}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
