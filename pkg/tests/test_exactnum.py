import random
from fractions import Fraction

import pytest
from sympy.polys.domains import QQ

from core.exactnum import (RowCompressor, integer_row, mat_vec, normalize, nullspace, rank, rat,
                           rat_matrix)


def test_rat_accepts_ints_fractions_and_qq():
    assert rat(6, 4) == QQ(3, 2)
    assert rat(Fraction(-5, 10)) == QQ(-1, 2)
    assert rat(QQ(7, 3)) == QQ(7, 3)


def test_integer_row_clears_denominators():
    assert integer_row([Fraction(1, 2), Fraction(1, 3), 1]) == [3, 2, 6]


def test_normalize_makes_primitive_with_positive_lead():
    assert normalize([0, -4, 6, -2]) == [0, 2, -3, 1]
    assert normalize([Fraction(1, 2), Fraction(-3, 4)]) == [2, -3]
    assert normalize([0, 0]) == [0, 0]


def test_rat_matrix_rejects_ragged_rows():
    with pytest.raises(ValueError):
        rat_matrix([[1, 2], [3]])


def test_nullspace_of_known_matrix():
    # columns: w1, w2, w3 with 12 w1 - 15 w2 - 20 w3 = 0
    m = [[5, 4, 0], [0, 4, -3], [10, 8, 0]]
    assert nullspace(m) == [[12, -15, -20]]


def test_nullspace_of_zero_matrix_is_standard_basis():
    assert nullspace([[0, 0, 0]]) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_nullspace_of_full_rank_is_empty():
    assert nullspace([[1, 0], [0, 1], [1, 1]]) == []


def test_rank_over_rationals():
    assert rank([[Fraction(1, 2), 1], [1, 2]]) == 1
    assert rank([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == 3
    assert rank([], cols=3) == 0


def test_nullspace_soundness_randomized():
    rng = random.Random(7)
    for _ in range(100):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 6)
        m = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)] for _ in range(rows)]
        basis = nullspace(m, cols=cols)
        assert len(basis) == cols - rank(m, cols=cols)
        for v in basis:
            assert all(x == 0 for x in mat_vec(m, v))
            assert normalize(v) == v


def test_row_compressor_matches_batch_nullspace():
    rng = random.Random(11)
    for _ in range(100):
        cols = rng.randint(1, 5)
        rows = [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rng.randint(1, 12))]
        compressor = RowCompressor(cols)
        compressor.extend(rows)
        assert compressor.rank == rank(rows, cols=cols)
        assert sorted(compressor.nullspace()) == sorted(nullspace(rows, cols=cols))


def test_row_compressor_stops_when_full():
    compressor = RowCompressor(2)
    assert compressor.add([1, 0])
    assert not compressor.add([2, 0])
    assert compressor.add([1, 1])
    assert compressor.full
    assert not compressor.add([5, 7])
    assert compressor.nullspace() == []
