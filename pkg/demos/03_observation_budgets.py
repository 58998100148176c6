"""Observation counts of HN2016, ERRE and EREI on shared random instances.

The (m + n - r) r deterministic skeleton is the floor for any method.
EREI spends one extra random sample per spanned column here because its
budget formula asks for fewer than one; with early exit it stops at the floor.
"""
from dataclasses import replace

from adaptive_completion import AlgoConfig, GenSpec, erei_bound, erre_bound
from adaptive_completion.bench import ExperimentConfig, compare_algorithms, format_comparison


def run_demo():
    m = n = 100
    r = 5
    gen = GenSpec(m, n, r)
    params = AlgoConfig(r=r, psi_u=m - r + 1, psi_v=n - r + 1, epsilon=0.1, T=3)
    shared = dict(gen=gen, trials=20, master_seed=0)
    configs = [
        ExperimentConfig(algo="hn2016", algo_params=params, **shared),
        ExperimentConfig(algo="erre", algo_params=params, **shared),
        ExperimentConfig(algo="erei", algo_params=params, **shared),
    ]
    print(format_comparison(compare_algorithms(configs)))
    early = compare_algorithms([ExperimentConfig(
        algo="erei", algo_params=replace(params, early_exit=True), **shared)])
    print(f"\nEREI with early exit: median {early[0]['median_total']:g}")
    print(f"skeleton (m+n-r)r       : {(m + n - r) * r}")
    print(f"EREI bound              : {erei_bound(m, n, r, 96, 96, 0.1):.1f}")
    print(f"ERRE bound (T=3)        : {erre_bound(m, n, r, 96, 96, 0.1, 3):.1f}")


if __name__ == '__main__':
    run_demo()
