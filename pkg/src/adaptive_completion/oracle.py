"""Entry oracle: the only path through which algorithms see the hidden matrix.

Every revealed cell is written to an :class:`ObservationLedger`.  Only distinct
cells count, so reading a cell twice is free.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Tag",
    "ObservationLedger",
    "ObservationStats",
    "EntryOracle",
    "read_matrix_file",
    "write_matrix_file",
]


class Tag(enum.IntEnum):
    """How a cell came to be observed.

    Ordered so that ``max`` gives the stronger classification: a randomly
    sampled cell that is later swept by a full row/column observation is
    reported as deterministic.
    """

    UNOBSERVED = 0
    RANDOM = 1
    DETERMINISTIC = 2

    @classmethod
    def coerce(cls, value) -> "Tag":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            try:
                return cls[value.upper()]
            except KeyError:
                raise ValueError(f"unknown tag {value!r}") from None
        return cls(value)


@dataclass(frozen=True)
class ObservationStats:
    total: int
    per_column: np.ndarray
    n_random: int
    n_deterministic: int
    tags: np.ndarray

    @property
    def mask(self) -> np.ndarray:
        return self.tags != Tag.UNOBSERVED

    def full_deterministic_columns(self) -> list[int]:
        """Columns whose every cell carries the deterministic tag."""
        return [int(j) for j in np.flatnonzero((self.tags == Tag.DETERMINISTIC).all(axis=0))]

    def full_deterministic_rows(self) -> list[int]:
        return [int(i) for i in np.flatnonzero((self.tags == Tag.DETERMINISTIC).all(axis=1))]


class ObservationLedger:
    def __init__(self, m: int, n: int):
        self.tags = np.zeros((m, n), dtype=np.int8)
        self.per_column = np.zeros(n, dtype=np.int64)
        self.total = 0

    @property
    def mask(self) -> np.ndarray:
        return self.tags != Tag.UNOBSERVED

    def record(self, i: int, j: int, tag: Tag) -> None:
        old = self.tags[i, j]
        if old == Tag.UNOBSERVED:
            self.total += 1
            self.per_column[j] += 1
        if tag > old:
            self.tags[i, j] = tag

    def record_many(self, rows, cols, tag: Tag) -> None:
        rows = np.asarray(rows, dtype=np.intp)
        cols = np.asarray(cols, dtype=np.intp)
        current = self.tags[rows, cols]
        fresh = current == Tag.UNOBSERVED
        if fresh.any():
            self.total += int(fresh.sum())
            np.add.at(self.per_column, cols[fresh], 1)
        self.tags[rows, cols] = np.maximum(current, np.int8(tag))


class EntryOracle:
    """Gatekeeper over a hidden ground-truth matrix.

    Parameters
    ----------
    ground_truth : array_like, shape (m, n)
        The matrix to be completed. A private read-only copy is kept.
    """

    def __init__(self, ground_truth):
        truth = np.array(ground_truth, dtype=float, copy=True)
        if truth.ndim != 2 or truth.shape[0] < 1 or truth.shape[1] < 1:
            raise ValueError(f"ground truth must be a non-empty 2-D matrix, got shape {truth.shape}")
        truth.setflags(write=False)
        self._truth = truth
        self.ledger = ObservationLedger(*truth.shape)

    @property
    def shape(self) -> tuple[int, int]:
        return self._truth.shape

    @property
    def m(self) -> int:
        return self._truth.shape[0]

    @property
    def n(self) -> int:
        return self._truth.shape[1]

    def _check_row(self, i) -> int:
        if not 0 <= int(i) < self.m:
            raise IndexError(f"row index {i} out of range [0, {self.m})")
        return int(i)

    def _check_col(self, j) -> int:
        if not 0 <= int(j) < self.n:
            raise IndexError(f"column index {j} out of range [0, {self.n})")
        return int(j)

    def observe_entry(self, i: int, j: int, tag=Tag.RANDOM) -> float:
        i, j = self._check_row(i), self._check_col(j)
        self.ledger.record(i, j, Tag.coerce(tag))
        return float(self._truth[i, j])

    def observe_entries(self, rows, j: int, tag=Tag.RANDOM) -> np.ndarray:
        """Observe ``M[rows, j]`` in one call."""
        j = self._check_col(j)
        rows = np.asarray(rows, dtype=np.intp).ravel()
        if rows.size and (rows.min() < 0 or rows.max() >= self.m):
            raise IndexError(f"row indices out of range [0, {self.m})")
        self.ledger.record_many(rows, np.full(rows.size, j), Tag.coerce(tag))
        return self._truth[rows, j].copy()

    def observe_column(self, j: int, tag=Tag.DETERMINISTIC) -> np.ndarray:
        j = self._check_col(j)
        self.ledger.record_many(np.arange(self.m), np.full(self.m, j), Tag.coerce(tag))
        return self._truth[:, j].copy()

    def observe_row(self, i: int, tag=Tag.DETERMINISTIC) -> np.ndarray:
        i = self._check_row(i)
        self.ledger.record_many(np.full(self.n, i), np.arange(self.n), Tag.coerce(tag))
        return self._truth[i, :].copy()

    def is_observed(self, i: int, j: int) -> bool:
        return bool(self.ledger.tags[i, j] != Tag.UNOBSERVED)

    def snapshot_stats(self) -> ObservationStats:
        tags = self.ledger.tags.copy()
        return ObservationStats(
            total=self.ledger.total,
            per_column=self.ledger.per_column.copy(),
            n_random=int((tags == Tag.RANDOM).sum()),
            n_deterministic=int((tags == Tag.DETERMINISTIC).sum()),
            tags=tags,
        )

    def audit_truth(self) -> np.ndarray:
        # Harness-only channel for scoring; bypasses the ledger on purpose.
        return self._truth.copy()


def write_matrix_file(path, matrix) -> None:
    """Write ``matrix`` as ``m n`` followed by ``m`` space-separated rows."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2:
        raise ValueError("matrix must be 2-D")
    m, n = matrix.shape
    lines = [f"{m} {n}"]
    lines.extend(" ".join(repr(float(v)) for v in row) for row in matrix)
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix_file(path) -> np.ndarray:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty matrix file")
    try:
        m, n = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise ValueError(f"{path}: header must be 'm n', got {lines[0]!r}") from None
    if m < 1 or n < 1:
        raise ValueError(f"{path}: dimensions must be positive, got {m}x{n}")
    if len(lines) - 1 != m:
        raise ValueError(f"{path}: expected {m} rows, found {len(lines) - 1}")
    rows = []
    for k, line in enumerate(lines[1:], start=2):
        values = line.split()
        if len(values) != n:
            raise ValueError(f"{path}:{k}: expected {n} values, found {len(values)}")
        rows.append([float(v) for v in values])
    return np.array(rows, dtype=float)
