"""Step through EREI on the 6x4 rank-1 walkthrough matrix.

Each column is probed on two sampled rows.  The third column is the first
whose samples hit a nonzero row; it is observed in full and row 2 becomes the
pivot row.  At the end row 2 is observed and everything else is recovered.
"""
import numpy as np

from adaptive_completion import EntryOracle, AlgoConfig, ScriptedSampler, run_erei, paper_example
from adaptive_completion.bench import PAPER_DELTAS, format_replay, is_exact


def run_demo():
    truth = paper_example()
    print("hidden matrix:\n", truth)

    # same sample sets as the published walkthrough
    oracle = EntryOracle(truth)
    result = run_erei(oracle, AlgoConfig(r=1, psi_u=2, psi_v=4, d_override=2),
                      sampler=ScriptedSampler(PAPER_DELTAS))
    result.exact = is_exact(result.estimate, truth)
    print(format_replay(result))

    # the same algorithm with uniformly random samples instead
    misses = 0
    for seed in range(1000):
        res = run_erei(EntryOracle(truth), AlgoConfig(r=1, d_override=2, seed=seed))
        misses += not is_exact(res.estimate, truth)
    print(f"\nrandom samples: {misses / 1000:.4f} failure rate "
          f"(all four draws miss rows 2 and 5 with probability {(6 / 15) ** 4:.4f})")


if __name__ == '__main__':
    np.set_printoptions(precision=3, suppress=True)
    run_demo()
