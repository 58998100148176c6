"""Adaptive exact low-rank matrix completion with observation accounting."""
from .algorithms import (AlgoConfig, RecoveryResult, ScriptedSampler, SingularRowSetError,
                         complete_column, erei_bound, erei_budget, erre_bound,
                         erre_failure_prob, hn2016_budget, residual_independent, run_erei,
                         run_erre, run_hn2016)
from .bench import (ExperimentConfig, TrialRecord, compare_algorithms, replay_paper_example,
                    run_experiment)
from .generate import GenSpec, gen_generic, gen_with_sparsity, generate, paper_example
from .oracle import EntryOracle, ObservationLedger, ObservationStats, Tag
from .sparsity import (EnumerationCapError, SubspaceBasis, coherence, nonsparsity_matrix,
                       nonsparsity_subspace, nonsparsity_vector, psi_from_coherence, sparsity)

__version__ = "0.1.0"
