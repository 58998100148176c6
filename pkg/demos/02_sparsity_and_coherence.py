"""Nonsparsity-number versus coherence on a few small subspaces.

Coherence looks at how much of a coordinate axis a subspace captures;
the nonsparsity-number asks how few coordinates a nonzero member can live on.
A generic r-dimensional subspace of R^m has nonsparsity m - r + 1.
"""
import numpy as np

from adaptive_completion import (GenSpec, SubspaceBasis, coherence, gen_generic,
                                 gen_with_sparsity, nonsparsity_subspace, psi_from_coherence)


def describe(label, matrix):
    basis = SubspaceBasis.from_matrix(matrix)
    m, r = basis.ambient_dim, basis.dim
    psi = nonsparsity_subspace(basis)
    mu = coherence(basis)
    print(f"{label:<28} m={m:2d} r={r} psi={psi:2d} sparsity={m - psi:2d} "
          f"coherence={mu:6.3f} psi-from-coherence={psi_from_coherence(mu, r, m)}")


def run_demo():
    describe("generic 12x10, rank 3", gen_generic(GenSpec(12, 10, 3, seed=0)))
    for target in (1, 3, 6, 10):
        spec = GenSpec(12, 10, 3, psi_u_target=target, seed=1)
        describe(f"planted support {target}", gen_with_sparsity(spec))
    describe("spanned by all-ones", np.ones((12, 1)))
    axis_plus_dense = np.column_stack([np.eye(12)[:, 0], np.random.default_rng(2).standard_normal(12)])
    describe("contains e_0", axis_plus_dense)


if __name__ == '__main__':
    run_demo()
