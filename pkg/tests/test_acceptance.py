"""Exit criteria for the package; each test reports one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary lines are
printed in the "acceptance criteria" section at the end of the session.
"""
import time

import numpy as np
import pytest

from adaptive_completion import (AlgoConfig, EntryOracle, GenSpec, SubspaceBasis, Tag,
                                 erei_bound, erre_bound, erre_failure_prob, gen_generic,
                                 gen_with_sparsity, nonsparsity_matrix, nonsparsity_subspace,
                                 paper_example, run_erei, run_erre, run_hn2016)
from adaptive_completion.bench import (ExperimentConfig, compare_algorithms, is_exact,
                                       replay_paper_example, run_experiment)
from adaptive_completion.oracle import write_matrix_file

R_, D_, U_ = Tag.RANDOM, Tag.DETERMINISTIC, Tag.UNOBSERVED
# final panel of the walkthrough: r = sampled, D = swept row/column, . = recovered
FIGURE_TAGS = np.array([
    [R_, U_, D_, U_],
    [U_, R_, D_, U_],
    [D_, D_, D_, D_],
    [U_, U_, D_, U_],
    [R_, R_, D_, R_],
    [U_, U_, D_, R_],
])


@pytest.fixture(scope="module")
def paper_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("acc") / "paper.txt"
    write_matrix_file(path, paper_example())
    return str(path)


def _skeleton_ok(res, m, n, r):
    return (res.stats.n_deterministic >= (m + n - r) * r
            and len(res.stats.full_deterministic_columns()) == r
            and len(res.stats.full_deterministic_rows()) == r)


def test_c1_paper_replay(report):
    start = time.perf_counter()
    res, truth = replay_paper_example()
    elapsed = time.perf_counter() - start
    checks = {
        "exact": res.exact,
        "R": res.row_set == [2],
        "full column": res.stats.full_deterministic_columns() == [2],
        "full row": res.stats.full_deterministic_rows() == [2],
        "total": res.stats.total == 15,
        "classes": np.array_equal(res.stats.tags, FIGURE_TAGS),
        "runtime": elapsed < 1.0,
    }
    bad = [k for k, v in checks.items() if not v]
    assert report(1, "paper-figure replay", not bad,
                  f"total={res.stats.total} R={res.row_set} t={elapsed:.3f}s failed={bad}")


def test_c2_fixture_failure_rate(report, paper_file):
    start = time.perf_counter()
    cfg = ExperimentConfig(algo="erei", matrix_file=paper_file, trials=200, master_seed=2024,
                           algo_params=AlgoConfig(r=1, psi_u=2, psi_v=4, epsilon=0.1,
                                                  d_override=2))
    rate = run_experiment(cfg).failure_rate
    elapsed = time.perf_counter() - start
    ok = rate <= 0.05 and elapsed < 5
    assert report(2, "EREI fixture failure rate <= 0.05", ok,
                  f"rate={rate:.4f} (analytic 0.0256) t={elapsed:.2f}s")


def test_c3_theorem2_bound(report):
    m = n = 100
    r, eps = 5, 0.1
    params = AlgoConfig(r=r, psi_u=m - r + 1, psi_v=n - r + 1, epsilon=eps)
    bound = erei_bound(m, n, r, 96, 96, eps)
    res = run_experiment(ExperimentConfig(algo="erei", gen=GenSpec(m, n, r), trials=100,
                                          master_seed=31, algo_params=params))
    over = [rec.total_obs for rec in res.records if rec.success and rec.total_obs > bound]
    ok = res.failure_rate <= 0.1 and not over
    assert report(3, "EREI Theorem-2 bound, 100x100 rank 5", ok,
                  f"fail={res.failure_rate:.3f} bound={bound:.2f} "
                  f"max_total={max(res.totals)} over_bound={len(over)}/100")


def test_c4_theorem1_bound(report):
    m = n = 40
    r, eps, T = 3, 0.1, 3
    params = AlgoConfig(r=r, psi_u=m - r + 1, psi_v=n - r + 1, epsilon=eps, T=T)
    bound = erre_bound(m, n, r, 38, 38, eps, T)
    budget = erre_failure_prob(m, 38, 38, eps, T) + 0.05
    res = run_experiment(ExperimentConfig(algo="erre", gen=GenSpec(m, n, r), trials=100,
                                          master_seed=41, algo_params=params))
    wins = [rec for rec in res.records if rec.success]
    over = [rec.total_obs for rec in wins if rec.total_obs > bound]
    ranks_ok = all(rec.estimated_rank == r for rec in wins)
    ok = res.failure_rate <= budget and not over and ranks_ok
    assert report(4, "ERRE Theorem-1 bound, 40x40 rank 3, T=3", ok,
                  f"fail={res.failure_rate:.3f} (budget {budget:.3f}) bound={bound:.2f} "
                  f"max_total={max(res.totals)} over_bound={len(over)}/{len(wins)} "
                  f"ranks_ok={ranks_ok}")


def test_c5_sparsity_oracle_equivalence(report):
    start = time.perf_counter()
    rng = np.random.default_rng(55)
    mismatches = []
    for t in range(50):
        m, n = int(rng.integers(3, 13)), int(rng.integers(3, 13))
        r = int(rng.integers(1, min(m, n) + 1))
        pu = int(rng.integers(1, m - r + 2))
        pv = int(rng.integers(1, n - r + 2)) if t % 2 else None
        a = gen_with_sparsity(GenSpec(m, n, r, psi_u_target=pu, psi_v_target=pv, seed=t))
        psi_u = nonsparsity_subspace(SubspaceBasis.from_matrix(a))
        ok = psi_u == pu and nonsparsity_matrix(a) == psi_u
        if pv is not None:
            psi_v = nonsparsity_subspace(SubspaceBasis.from_matrix(a.T))
            ok = ok and psi_v == pv and nonsparsity_matrix(a.T) == psi_v
        if not ok:
            mismatches.append(t)
    elapsed = time.perf_counter() - start
    assert report(5, "sparsity-oracle equivalence on 50 instances",
                  not mismatches and elapsed < 30, f"mismatches={mismatches} t={elapsed:.2f}s")


def test_c6_full_sampling(report):
    start = time.perf_counter()
    rng = np.random.default_rng(66)
    bad = []
    for t in range(20):
        m, n = int(rng.integers(3, 30)), int(rng.integers(3, 30))
        r = int(rng.integers(1, min(m, n) + 1))
        a = gen_generic(GenSpec(m, n, r, seed=600 + t))
        for runner in (run_hn2016, run_erre, run_erei):
            cfg = AlgoConfig(r=r, psi_u=m - r + 1, psi_v=n - r + 1, d_override=m, T=1, seed=t)
            res = runner(EntryOracle(a), cfg)
            if res.estimated_rank != r or not is_exact(res.estimate, a):
                bad.append((t, runner.__name__))
    elapsed = time.perf_counter() - start
    assert report(6, "full-sampling degeneracy, 3 algorithms x 20 instances",
                  not bad and elapsed < 10, f"bad={bad} t={elapsed:.2f}s")


def test_c7_structural_identity(report):
    checked, bad = 0, 0
    truth = paper_example()
    for seed in range(200):
        res = run_erei(EntryOracle(truth), AlgoConfig(r=1, d_override=2, seed=seed))
        if res.estimated_rank == 1 and is_exact(res.estimate, truth):
            checked += 1
            bad += not _skeleton_ok(res, 6, 4, 1)
    for t in range(30):
        a = gen_generic(GenSpec(100, 100, 5, seed=700 + t))
        res = run_erei(EntryOracle(a), AlgoConfig(r=5, psi_u=96, psi_v=96, seed=t))
        if res.estimated_rank == 5 and is_exact(res.estimate, a):
            checked += 1
            bad += not _skeleton_ok(res, 100, 100, 5)
    rng = np.random.default_rng(77)
    for t in range(30):
        m, n = int(rng.integers(5, 25)), int(rng.integers(5, 25))
        r = int(rng.integers(1, min(m, n) // 2 + 1))
        a = gen_generic(GenSpec(m, n, r, seed=800 + t))
        res = run_erei(EntryOracle(a), AlgoConfig(r=r, psi_u=m - r + 1, psi_v=n - r + 1, seed=t))
        if res.estimated_rank == r and is_exact(res.estimate, a):
            checked += 1
            bad += not _skeleton_ok(res, m, n, r)
    assert report(7, "EREI deterministic skeleton on every success",
                  checked > 0 and bad == 0, f"successes={checked} violations={bad}")


def test_c8_bound_identity(report):
    rng = np.random.default_rng(88)
    worst = 0.0
    for _ in range(100):
        m, n = (int(v) for v in rng.integers(1, 1000, size=2))
        r = int(rng.integers(1, min(m, n) + 1))
        pu, pv = int(rng.integers(1, m + 1)), int(rng.integers(1, n + 1))
        eps, T = float(rng.uniform(1e-3, 0.999)), int(rng.integers(1, 50))
        a = erre_bound(m, n, r, pu, pv, eps, T)
        b = erei_bound(m, n, r, pu, pv, eps)
        worst = max(worst, abs((a - b) - T * n) / a)
    assert report(8, "erre_bound - erei_bound = T*n", worst <= 1e-12,
                  f"max_rel_err={worst:.2e}")


def test_c9_comparison_report(report):
    gen = GenSpec(100, 100, 5)
    shared = dict(gen=gen, trials=20, master_seed=9)
    params = AlgoConfig(r=5, psi_u=96, psi_v=96, epsilon=0.1)
    erei, hn = compare_algorithms([ExperimentConfig(algo="erei", algo_params=params, **shared),
                                   ExperimentConfig(algo="hn2016", algo_params=params, **shared)])
    ok = erei["median_total"] < hn["median_total"]
    assert report(9, "comparison: EREI median < HN2016 median", ok,
                  f"erei={erei['median_total']} hn2016={hn['median_total']}")
