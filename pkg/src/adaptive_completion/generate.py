"""Seeded ground-truth matrices with prescribed rank and sparsity structure.

Randomness comes from numpy's PCG64 generator.  A master seed is expanded with
``SeedSequence.spawn`` into independent streams for the column factor and the
row factor, so changing one target does not perturb the other factor.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = ["GenSpec", "gen_generic", "gen_with_sparsity", "generate", "paper_example"]


@dataclass(frozen=True)
class GenSpec:
    m: int
    n: int
    r: int
    psi_u_target: Optional[int] = None
    psi_v_target: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"dimensions must be positive, got {self.m}x{self.n}")
        if not 1 <= self.r <= min(self.m, self.n):
            raise ValueError(f"rank must lie in [1, {min(self.m, self.n)}], got {self.r}")
        for name, target, dim in (("psi_u_target", self.psi_u_target, self.m),
                                  ("psi_v_target", self.psi_v_target, self.n)):
            if target is None:
                continue
            if target < 1 or target > dim:
                raise ValueError(f"{name}={target} outside [1, {dim}]")
            # a generic r-dim subspace already has a vector of support dim-r+1
            if target > dim - self.r + 1:
                raise ValueError(
                    f"{name}={target} infeasible for rank {self.r}: at most {dim - self.r + 1}")


def _factor_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    left, right = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(left), np.random.default_rng(right)


def _dense_factor(rng: np.random.Generator, dim: int, r: int) -> np.ndarray:
    return rng.standard_normal((dim, r))


def _sparse_led_factor(rng: np.random.Generator, dim: int, r: int, support: int) -> np.ndarray:
    factor = rng.standard_normal((dim, r))
    lead = np.zeros(dim)
    idx = rng.choice(dim, size=support, replace=False)
    # keep nonzeros away from 0 so the support is numerically unambiguous
    lead[idx] = rng.choice([-1.0, 1.0], size=support) * rng.uniform(0.5, 2.0, size=support)
    factor[:, 0] = lead
    return factor


def gen_generic(spec: GenSpec) -> np.ndarray:
    """Rank-``r`` product of two Gaussian factors."""
    if spec.psi_u_target is not None or spec.psi_v_target is not None:
        raise ValueError("gen_generic takes no sparsity targets; use gen_with_sparsity")
    rng_a, rng_b = _factor_streams(spec.seed)
    return _dense_factor(rng_a, spec.m, spec.r) @ _dense_factor(rng_b, spec.n, spec.r).T


def gen_with_sparsity(spec: GenSpec) -> np.ndarray:
    """Rank-``r`` matrix whose column (row) space holds a vector of the target support.

    The sparse vector is the first column of the corresponding factor; the
    other ``r - 1`` columns are dense, so no sparser direction exists almost
    surely.
    """
    if spec.psi_u_target is None and spec.psi_v_target is None:
        raise ValueError("gen_with_sparsity needs psi_u_target and/or psi_v_target")
    rng_a, rng_b = _factor_streams(spec.seed)
    if spec.psi_u_target is None:
        a = _dense_factor(rng_a, spec.m, spec.r)
    else:
        a = _sparse_led_factor(rng_a, spec.m, spec.r, spec.psi_u_target)
    if spec.psi_v_target is None:
        b = _dense_factor(rng_b, spec.n, spec.r)
    else:
        b = _sparse_led_factor(rng_b, spec.n, spec.r, spec.psi_v_target)
    return a @ b.T


def generate(spec: GenSpec) -> np.ndarray:
    """Dispatch to :func:`gen_with_sparsity` when any target is set."""
    if spec.psi_u_target is None and spec.psi_v_target is None:
        return gen_generic(spec)
    return gen_with_sparsity(spec)


def paper_example() -> np.ndarray:
    """The 6x4 rank-1 walkthrough matrix: ``(0,0,1,0,0,2)^T (1,3,2,3)``."""
    return np.outer([0.0, 0.0, 1.0, 0.0, 0.0, 2.0], [1.0, 3.0, 2.0, 3.0])
