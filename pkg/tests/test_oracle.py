import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adaptive_completion import EntryOracle, Tag, paper_example
from adaptive_completion.oracle import read_matrix_file, write_matrix_file


@pytest.fixture
def oracle():
    return EntryOracle(paper_example())


def test_observe_entry_counts_once(oracle):
    assert oracle.observe_entry(2, 0, "random") == 1.0
    assert oracle.ledger.total == 1
    assert oracle.observe_entry(2, 0, "random") == 1.0
    assert oracle.ledger.total == 1
    assert oracle.observe_entry(5, 3) == 6.0
    assert oracle.ledger.total == 2


def test_out_of_range(oracle):
    with pytest.raises(IndexError):
        oracle.observe_entry(6, 0)
    with pytest.raises(IndexError):
        oracle.observe_column(4)
    with pytest.raises(IndexError):
        oracle.observe_row(-1)


def test_observe_column(oracle):
    np.testing.assert_array_equal(oracle.observe_column(2), [0, 0, 2, 0, 0, 4])
    assert oracle.ledger.total == 6
    oracle.observe_column(2)
    assert oracle.ledger.total == 6


def test_column_after_entry_adds_m_minus_one(oracle):
    oracle.observe_entry(0, 1)
    before = oracle.ledger.total
    oracle.observe_column(1)
    assert oracle.ledger.total - before == oracle.m - 1


def test_observe_row(oracle):
    np.testing.assert_array_equal(oracle.observe_row(2), [1, 3, 2, 3])
    np.testing.assert_array_equal(oracle.observe_row(0), [0, 0, 0, 0])
    total = oracle.ledger.total
    oracle.observe_row(2)
    assert oracle.ledger.total == total == 8


def test_snapshot_is_pure(oracle):
    s = oracle.snapshot_stats()
    assert s.total == 0 and not s.per_column.any()
    oracle.observe_column(3)
    s = oracle.snapshot_stats()
    assert s.per_column[3] == oracle.m
    assert oracle.snapshot_stats().total == s.total


def test_deterministic_sweep_upgrades_random_tag(oracle):
    oracle.observe_entry(2, 2, Tag.RANDOM)
    oracle.observe_column(2, Tag.DETERMINISTIC)
    assert oracle.ledger.tags[2, 2] == Tag.DETERMINISTIC
    oracle.observe_entry(2, 2, Tag.RANDOM)
    assert oracle.ledger.tags[2, 2] == Tag.DETERMINISTIC


def test_ground_truth_is_read_only(oracle):
    with pytest.raises(ValueError):
        oracle._truth[0, 0] = 5.0


def test_rejects_bad_shapes():
    with pytest.raises(ValueError):
        EntryOracle(np.zeros((0, 3)))
    with pytest.raises(ValueError):
        EntryOracle(np.zeros(3))


calls = st.lists(st.tuples(st.sampled_from(["entry", "row", "col"]),
                           st.integers(0, 5), st.integers(0, 3),
                           st.sampled_from([Tag.RANDOM, Tag.DETERMINISTIC])),
                 max_size=30)


@settings(max_examples=100, deadline=None)
@given(calls)
def test_ledger_invariants(seq):
    a, b = EntryOracle(paper_example()), EntryOracle(paper_example())
    seen, first_tag = set(), {}
    last_total = 0
    for kind, i, j, tag in seq:
        if kind == "entry":
            cells = [(i, j)]
        elif kind == "row":
            cells = [(i, c) for c in range(4)]
        else:
            cells = [(r, j) for r in range(6)]
        for o in (a, b):
            {"entry": lambda: o.observe_entry(i, j, tag),
             "row": lambda: o.observe_row(i, tag),
             "col": lambda: o.observe_column(j, tag)}[kind]()
        for cell in cells:
            first_tag[cell] = max(first_tag.get(cell, Tag.UNOBSERVED), tag)
        seen.update(cells)
        assert a.ledger.total >= last_total
        last_total = a.ledger.total
    led = a.ledger
    assert led.total == len(seen) == led.mask.sum()
    np.testing.assert_array_equal(led.per_column, led.mask.sum(axis=0))
    assert ((led.tags == Tag.UNOBSERVED) == ~led.mask).all()
    for (i, j), tag in first_tag.items():
        assert led.tags[i, j] == tag
    np.testing.assert_array_equal(a.ledger.tags, b.ledger.tags)


def test_matrix_file_roundtrip(tmp_path):
    rng = np.random.default_rng(3)
    mat = rng.standard_normal((4, 7))
    path = tmp_path / "m.txt"
    write_matrix_file(path, mat)
    lines = path.read_text().splitlines()
    assert lines[0] == "4 7"
    assert all(len(line.split(" ")) == 7 for line in lines[1:])
    np.testing.assert_array_equal(read_matrix_file(path), mat)


@pytest.mark.parametrize("text", ["", "2 2\n1 2\n", "2 2\n1 2\n3\n", "x y\n"])
def test_matrix_file_malformed(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(ValueError):
        read_matrix_file(path)
