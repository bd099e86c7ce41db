"""Minimal reductions against a brute-force oracle."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brattice import corpus
from brattice.diagram import MultiplicityMatrix, multiplicity_rank
from brattice.errors import LimitExceeded, RankDeficient, Singular
from brattice.reduction import (
    enumerate_minimal_reductions,
    is_unique_minimal,
    minimal_reduce,
    minimal_reduce_square,
    pivot_row,
    reduction_is_valid,
)


def oracle_enumeration(mat):
    """Every row->column map that stays inside supports and covers all columns."""
    supports = [mat.row_support(i) for i in range(1, mat.nrows + 1)]
    out = []
    for combo in itertools.product(*supports):
        if len(set(combo)) == mat.ncols:
            out.append(combo)
    return out


def rand_single_surplus(rng, max_rows=5, entry_hi=3):
    while True:
        cols = rng.randint(1, max_rows - 1)
        rows = cols + 1
        m = [[rng.randint(0, entry_hi) for _ in range(cols)] for _ in range(rows)]
        mm = MultiplicityMatrix(m)
        if mm.has_positive_rows_and_cols():
            return mm


def test_pivot_row_frozen():
    assert pivot_row([[1, 0], [0, 1]]) == 2
    assert pivot_row([[0, 1], [1, 0]]) == 1
    with pytest.raises(Singular):
        pivot_row([[1, 0], [1, 0]])
    with pytest.raises(ValueError):
        pivot_row([[1, 0, 0], [0, 1, 0]])


def test_pivot_row_matches_scan():
    rng = random.Random(1312)
    hits = 0
    for _ in range(200):
        s = rng.randint(1, 4)
        rows = [[rng.randint(0, 2) for _ in range(s)] for _ in range(s)]
        expected = None
        for k in range(1, s + 1):
            if rows[k - 1][s - 1] == 0:
                continue
            minor = [r[: s - 1] for i, r in enumerate(rows, start=1) if i != k]
            from brattice import matops

            if s == 1 or matops.det(minor) != 0:
                expected = k
                break
        if expected is None:
            with pytest.raises(Singular):
                pivot_row(rows)
        else:
            assert pivot_row(rows) == expected
            hits += 1
    assert hits > 50


def test_minimal_reduce_frozen():
    out = minimal_reduce(corpus.get("twocol").matrix())
    assert out.parents == (2, 1, 1)
    assert out.branch_col == 1
    assert out.method == "tall"

    out = minimal_reduce(corpus.get("forced").matrix())
    assert out.parents == (1, 2, 2)
    assert out.branch_col == 2

    out = minimal_reduce(corpus.get("threebranch").matrix())
    assert out.parents == (2, 1, 1)
    assert out.branch_col == 1


def test_minimal_reduce_square_frozen():
    out = minimal_reduce_square(corpus.get("squareswap").matrix())
    assert out.parents == (2, 1)
    assert out.branch_col is None
    assert out.method == "square"
    with pytest.raises(RankDeficient):
        minimal_reduce_square(MultiplicityMatrix([[1, 1], [1, 1]]))


def test_fan43_negative_control():
    mat = corpus.get("fan43").matrix()
    assert multiplicity_rank(mat) == 2
    with pytest.raises(RankDeficient):
        minimal_reduce(mat)
    assert enumerate_minimal_reductions(mat) == []


def test_reduction_is_valid():
    mat = corpus.get("threebranch").matrix()
    assert reduction_is_valid(mat, (2, 1, 1))
    assert not reduction_is_valid(mat, (1, 1, 1))  # misses column 2
    assert not reduction_is_valid(mat, (2, 1))
    assert not reduction_is_valid(mat, (2, 1, 2))  # row 3 has no edge to 2


def test_enumeration_matches_oracle():
    rng = random.Random(88172)
    for _ in range(150):
        rows = rng.randint(2, 5)
        cols = rng.randint(1, rows)
        m = [[rng.randint(0, 2) for _ in range(cols)] for _ in range(rows)]
        mm = MultiplicityMatrix(m)
        got = list(enumerate_minimal_reductions(mm))
        want = oracle_enumeration(mm)
        assert got == sorted(want)
        assert got == sorted(got)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(min_value=0, max_value=2), min_size=2, max_size=2),
        min_size=2,
        max_size=4,
    )
)
def test_enumeration_oracle_hypothesis(rows):
    mm = MultiplicityMatrix(rows)
    assert list(enumerate_minimal_reductions(mm)) == sorted(oracle_enumeration(mm))


def test_enumeration_limit():
    wide = MultiplicityMatrix([[1, 1], [1, 1], [1, 1]])
    assert len(enumerate_minimal_reductions(wide)) == 6
    with pytest.raises(LimitExceeded):
        enumerate_minimal_reductions(wide, limit=5)
    # exactly at the cap is fine
    assert len(enumerate_minimal_reductions(wide, limit=6)) == 6


def test_minimal_reduce_lands_in_enumeration():
    rng = random.Random(424242)
    produced = 0
    for _ in range(200):
        mm = rand_single_surplus(rng)
        if multiplicity_rank(mm) < mm.ncols:
            with pytest.raises(RankDeficient):
                minimal_reduce(mm)
            continue
        out = minimal_reduce(mm)
        produced += 1
        assert reduction_is_valid(mm, out.parents)
        assert out.parents in set(oracle_enumeration(mm))
        # exactly one column is hit twice, the rest once
        counts = sorted(out.parents.count(j) for j in range(1, mm.ncols + 1))
        assert counts == [1] * (mm.ncols - 1) + [2]
        assert out.parents.count(out.branch_col) == 2
    assert produced > 100


def test_is_unique_minimal():
    assert is_unique_minimal(corpus.get("forced").matrix()) == (True, 2)
    assert is_unique_minimal(corpus.get("twocol").matrix()) == (False, None)
    propersub = corpus.get("propersub").diagram()
    assert is_unique_minimal(propersub.matrix(0)) == (True, 1)
    assert is_unique_minimal(propersub.matrix(2)) == (True, 3)


def test_unique_minimal_flag_implies_singleton_enumeration():
    rng = random.Random(9000)
    flagged = 0
    for _ in range(300):
        mm = rand_single_surplus(rng, max_rows=5, entry_hi=2)
        flag, branch = is_unique_minimal(mm)
        if not flag:
            continue
        flagged += 1
        maps = oracle_enumeration(mm)
        assert len(maps) == 1
        assert maps[0].count(branch) == 2
    assert flagged > 5
