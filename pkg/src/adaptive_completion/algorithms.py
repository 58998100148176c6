"""Adaptive exact completion: HN2016, ERRE and EREI run against an EntryOracle.

All three share the same building blocks: a residual test on a sampled row
set, Gram-Schmidt extension of the recovered column space, and least-squares
completion of spanned columns from a few of their entries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .oracle import EntryOracle, ObservationStats, Tag
from .sparsity import SubspaceBasis

__all__ = [
    "AlgoConfig",
    "RecoveryResult",
    "SingularRowSetError",
    "Sampler",
    "uniform_sampler",
    "ScriptedSampler",
    "residual_independent",
    "complete_column",
    "erei_budget",
    "hn2016_budget",
    "erei_bound",
    "erre_bound",
    "erre_failure_prob",
    "run_hn2016",
    "run_erre",
    "run_erei",
    "ALGORITHMS",
]

# (candidates, size) -> chosen subset of candidates
Sampler = Callable[[np.ndarray, int], np.ndarray]


class SingularRowSetError(np.linalg.LinAlgError):
    """The basis restricted to the tracked rows lost full column rank."""


@dataclass(frozen=True)
class AlgoConfig:
    r: int = 1
    psi_u: int = 1
    psi_v: int = 1
    epsilon: float = 0.1
    T: int = 1
    d_override: Optional[int] = None
    seed: int = 0
    tol: float = 1e-9
    mu0: Optional[float] = None
    early_exit: bool = False

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.psi_u < 1 or self.psi_v < 1:
            raise ValueError("psi_u and psi_v must be >= 1")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")
        if self.d_override is not None and self.d_override < 1:
            raise ValueError(f"d_override must be >= 1, got {self.d_override}")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.mu0 is not None and self.mu0 < 1:
            raise ValueError(f"mu0 must be >= 1, got {self.mu0}")


@dataclass
class RecoveryResult:
    estimate: np.ndarray
    estimated_rank: int
    stats: ObservationStats
    exact: Optional[bool] = None
    col_set: list = field(default_factory=list)
    row_set: list = field(default_factory=list)
    d: Optional[int] = None


def uniform_sampler(rng: np.random.Generator) -> Sampler:
    def sample(candidates, size):
        return rng.choice(candidates, size=size, replace=False)
    return sample


class ScriptedSampler:
    """Replays a fixed list of row sets, one per draw.

    Each scripted set must be drawable: a subset of the candidates offered at
    that point.  Used to reproduce a documented run step by step.
    """

    def __init__(self, draws: Sequence[Sequence[int]]):
        self._draws = [np.asarray(d, dtype=np.intp) for d in draws]
        self.calls = 0

    def __call__(self, candidates, size):
        if self.calls >= len(self._draws):
            raise RuntimeError(f"script exhausted after {self.calls} draws")
        draw = self._draws[self.calls]
        self.calls += 1
        if draw.size != size:
            raise ValueError(f"draw {self.calls}: scripted size {draw.size}, requested {size}")
        if not np.isin(draw, candidates).all():
            raise ValueError(f"draw {self.calls}: {draw.tolist()} not within candidates")
        return draw


def residual_independent(basis: SubspaceBasis, omega, col_omega, tol: float = 1e-9) -> bool:
    """Whether ``col_omega`` leaves a nonzero residual against ``basis`` rows ``omega``."""
    omega = np.asarray(omega, dtype=np.intp).ravel()
    y = np.asarray(col_omega, dtype=float).ravel()
    if omega.size != y.size:
        raise ValueError(f"omega has {omega.size} rows but col_omega has {y.size} values")
    norm_y = float(np.linalg.norm(y))
    if basis.dim == 0 or omega.size == 0:
        residual = norm_y
    else:
        a = basis.rows(omega)
        coef = np.linalg.lstsq(a, y, rcond=None)[0]
        residual = float(np.linalg.norm(y - a @ coef))
    return residual > tol * max(1.0, norm_y)


def _full_column_rank(a: np.ndarray, tol: float) -> bool:
    if a.shape[1] == 0:
        return True
    if a.shape[0] < a.shape[1]:
        return False
    s = np.linalg.svd(a, compute_uv=False)
    return bool(s[0] > 0 and s[-1] > tol * s[0])


def complete_column(basis: SubspaceBasis, rows, col_rows, tol: float = 1e-9) -> np.ndarray:
    """``U pinv(U[rows]) col_rows``: the span member agreeing with ``col_rows``."""
    rows = np.asarray(rows, dtype=np.intp).ravel()
    y = np.asarray(col_rows, dtype=float).ravel()
    if rows.size != y.size:
        raise ValueError(f"{rows.size} rows but {y.size} values")
    if basis.dim == 0:
        return np.zeros(basis.ambient_dim)
    a = basis.rows(rows)
    if not _full_column_rank(a, tol):
        raise SingularRowSetError(
            f"basis restricted to rows {rows.tolist()} is rank deficient (dim {basis.dim})")
    coef = np.linalg.lstsq(a, y, rcond=None)[0]
    return basis.vectors @ coef


def _clamp(value: int, lo: int, hi: int) -> int:
    return max(lo, min(hi, value))


def erei_budget(config: AlgoConfig, m: int) -> int:
    """Per-column random sample size, ``ceil`` of the smaller budget branch in ``[1, m]``."""
    if config.d_override is not None:
        return _clamp(config.d_override, 1, m)
    r, eps = config.r, config.epsilon
    by_union_bound = 2 * m / config.psi_u * math.log(r / eps)
    by_row_space = 2 * m / config.psi_u * (r + 2 + math.log(1 / eps)) / config.psi_v
    return _clamp(math.ceil(min(by_union_bound, by_row_space)), 1, m)


def hn2016_budget(config: AlgoConfig, m: int) -> int:
    """``ceil(2 mu0 r ln(r/eps))``; without ``mu0`` it uses ``m / psi_u`` in place of ``mu0 r``."""
    if config.d_override is not None:
        return _clamp(config.d_override, 1, m)
    log_term = math.log(config.r / config.epsilon)
    if config.mu0 is not None:
        raw = 2 * config.mu0 * config.r * log_term
    else:
        raw = 2 * m / config.psi_u * log_term
    return _clamp(math.ceil(raw), 1, m)


def _sampling_term(m, n, r, psi_u, psi_v, epsilon) -> float:
    return min(2 * (m * n / psi_u) * math.log(r / epsilon),
               (2 * m / psi_u) * (r + 2 + math.log(1 / epsilon)) * n / psi_v)


def erei_bound(m, n, r, psi_u, psi_v, epsilon) -> float:
    return (m + n - r) * r + _sampling_term(m, n, r, psi_u, psi_v, epsilon)


def erre_bound(m, n, r, psi_u, psi_v, epsilon, T) -> float:
    return (m + n - r) * r + T * n + _sampling_term(m, n, r, psi_u, psi_v, epsilon)


def erre_failure_prob(m, psi_u, psi_v, epsilon, T) -> float:
    return epsilon + math.exp(-T * psi_u * psi_v / m)


class _Workspace:
    """Observed values mirrored locally so nothing is read off-ledger."""

    def __init__(self, oracle: EntryOracle):
        self.oracle = oracle
        self.values = np.full(oracle.shape, np.nan)

    def entries(self, rows, j, tag) -> np.ndarray:
        vals = self.oracle.observe_entries(rows, j, tag)
        self.values[rows, j] = vals
        return vals

    def column(self, j) -> np.ndarray:
        col = self.oracle.observe_column(j, Tag.DETERMINISTIC)
        self.values[:, j] = col
        return col

    def row(self, i) -> np.ndarray:
        row = self.oracle.observe_row(i, Tag.DETERMINISTIC)
        self.values[i, :] = row
        return row


def run_hn2016(oracle: EntryOracle, config: AlgoConfig,
               sampler: Optional[Sampler] = None) -> RecoveryResult:
    """Single pass with one row sample ``Omega`` shared by every column."""
    m, n = oracle.shape
    sample = sampler or uniform_sampler(np.random.default_rng(config.seed))
    d = hn2016_budget(config, m)
    omega = np.sort(np.asarray(sample(np.arange(m), d), dtype=np.intp))

    ws = _Workspace(oracle)
    basis = SubspaceBasis.empty(m)
    estimate = np.zeros((m, n))
    full_cols = []
    for i in range(n):
        y = ws.entries(omega, i, Tag.RANDOM)
        if residual_independent(basis, omega, y, config.tol):
            col = ws.column(i)
            basis = basis.extend(col)
            estimate[:, i] = col
            full_cols.append(i)
        else:
            estimate[:, i] = complete_column(basis, omega, y, config.tol)
    return RecoveryResult(estimate, basis.dim, oracle.snapshot_stats(),
                          col_set=full_cols, row_set=[], d=d)


def _nonsingular(sub: np.ndarray, tol: float) -> bool:
    s = np.linalg.svd(sub, compute_uv=False)
    return bool(s[0] > 0 and np.sum(s > tol * s[0]) == sub.shape[0])


def run_erre(oracle: EntryOracle, config: AlgoConfig,
             sampler: Optional[Sampler] = None) -> RecoveryResult:
    """Multi-pass rank-revealing sweep; stops after ``T`` passes without a new pivot."""
    m, n = oracle.shape
    sample = sampler or uniform_sampler(np.random.default_rng(config.seed))
    ws = _Workspace(oracle)
    rows, cols = [], []
    delay = 0
    while delay < config.T:
        delay += 1
        for j in range(n):
            unobserved = np.flatnonzero(~oracle.ledger.mask[:, j])
            if unobserved.size == 0:
                continue
            i = int(sample(unobserved, 1)[0])
            cand_rows, cand_cols = rows + [i], cols + [j]
            for c in cand_cols:
                missing = [r for r in cand_rows if not oracle.is_observed(r, c)]
                if missing:
                    ws.entries(missing, c, Tag.RANDOM)
            sub = ws.values[np.ix_(cand_rows, cand_cols)]
            if _nonsingular(sub, config.tol):
                ws.column(j)
                ws.row(i)
                rows, cols = cand_rows, cand_cols
                delay = 0

    estimate = np.zeros((m, n))
    if cols:
        q, _ = np.linalg.qr(ws.values[:, cols])
        basis = SubspaceBasis(q)
    else:
        basis = SubspaceBasis.empty(m)
    for j in range(n):
        if j in cols:
            estimate[:, j] = ws.values[:, j]
        else:
            estimate[:, j] = complete_column(basis, rows, ws.values[rows, j], config.tol)
    return RecoveryResult(estimate, len(cols), oracle.snapshot_stats(),
                          col_set=cols, row_set=rows)


def _select_pivot_row(basis: SubspaceBasis, rows: list, omega, tol: float) -> int:
    for a in omega:
        if a in rows:
            continue
        if _full_column_rank(basis.rows(rows + [int(a)]), tol):
            return int(a)
    raise SingularRowSetError(
        f"no row of {list(map(int, omega))} extends rows {rows} to rank {basis.dim}")


def run_erei(oracle: EntryOracle, config: AlgoConfig,
             sampler: Optional[Sampler] = None) -> RecoveryResult:
    """Single pass over columns, then the tracked rows are observed in full.

    Each column is tested on ``Omega = Delta | R`` with ``Delta`` a fresh
    uniform draw of ``d`` rows outside ``R``.  On a detection the column is
    observed, the basis grows, and one sampled row that keeps ``U[R]``
    nonsingular joins ``R``.  Afterwards every column not observed in full is
    completed from its entries in ``R``.
    """
    m, n = oracle.shape
    sample = sampler or uniform_sampler(np.random.default_rng(config.seed))
    d = erei_budget(config, m)

    ws = _Workspace(oracle)
    basis = SubspaceBasis.empty(m)
    rows: list[int] = []
    full_cols: list[int] = []
    for i in range(n):
        if config.early_exit and basis.dim >= config.r:
            break
        outside = np.setdiff1d(np.arange(m), rows)
        delta = np.asarray(sample(outside, min(d, outside.size)), dtype=np.intp)
        if rows:
            ws.entries(rows, i, Tag.DETERMINISTIC)
        ws.entries(delta, i, Tag.RANDOM)
        omega = np.sort(np.concatenate([np.asarray(rows, dtype=np.intp), delta]))
        if residual_independent(basis, omega, ws.values[omega, i], config.tol):
            basis = basis.extend(ws.column(i))
            rows.append(_select_pivot_row(basis, rows, omega, config.tol))
            full_cols.append(i)

    for a in rows:
        ws.row(a)
    estimate = np.zeros((m, n))
    observed = oracle.ledger.mask
    for i in range(n):
        if observed[:, i].all():
            estimate[:, i] = ws.values[:, i]
        else:
            estimate[:, i] = complete_column(basis, rows, ws.values[rows, i], config.tol)
    return RecoveryResult(estimate, basis.dim, oracle.snapshot_stats(),
                          col_set=full_cols, row_set=list(rows), d=d)


ALGORITHMS = {"hn2016": run_hn2016, "erre": run_erre, "erei": run_erei}
