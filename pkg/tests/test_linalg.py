"""Exact/numeric linear algebra kernel tests."""

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from secant3 import linalg
from secant3.errors import InvalidInput


def det_exact(rows):
    n = len(rows)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * Fraction(rows[0][j]) * det_exact(minor)
    return total


def minor_rank(rows):
    """Independent oracle: the largest r with a nonzero r x r minor."""
    nr, nc = len(rows), len(rows[0])
    for r in range(min(nr, nc), 0, -1):
        for rsel in itertools.combinations(range(nr), r):
            for csel in itertools.combinations(range(nc), r):
                sub = [[rows[i][j] for j in csel] for i in rsel]
                if det_exact(sub) != 0:
                    return r
    return 0


def test_rank_identity():
    assert linalg.mat_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3


def test_rank_zero_matrix():
    assert linalg.mat_rank([[0, 0], [0, 0], [0, 0]]) == 0


def test_rank_proportional_rows_matches_minor_oracle():
    m = [[1, 2], [2, 4], [3, 6]]
    assert minor_rank(m) == 1
    assert linalg.mat_rank(m) == 1


def test_numeric_rank_threshold():
    a = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]], dtype=complex)
    assert linalg.mat_rank(a.tolist()) == 1


def test_numeric_rank_rejects_nonfinite():
    with pytest.raises(InvalidInput):
        linalg.mat_rank([[1.0, float("inf")], [0.0, 1.0]])


def test_kernel_identity_trivial():
    assert linalg.kernel_basis([[1, 0], [0, 1]]) == []


def test_kernel_one_dim():
    basis = linalg.kernel_basis([[1, -1]])
    assert len(basis) == 1
    assert basis[0] == [Fraction(1), Fraction(1)]


def test_kernel_hankel_by_hand():
    # solved by hand: [[0,1,0],[1,0,0]] x = 0 forces x0 = x1 = 0
    basis = linalg.kernel_basis([[0, 1, 0], [1, 0, 0]])
    assert basis == [[Fraction(0), Fraction(0), Fraction(1)]]


def test_kernel_vectors_annihilate():
    rng = np.random.default_rng(5)
    for _ in range(25):
        nr, nc = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        m = [[int(v) for v in rng.integers(-4, 5, size=nc)] for _ in range(nr)]
        for v in linalg.kernel_basis(m):
            for row in m:
                assert sum(a * b for a, b in zip(row, v)) == 0


def test_solve_in_span_first_generator():
    gens = [[1, 0, 2], [0, 1, 1]]
    coeffs = linalg.solve_in_span([1, 0, 2], gens)
    assert coeffs == [Fraction(1), Fraction(0)]


def test_solve_in_span_zero_target():
    assert linalg.solve_in_span([0, 0], [[1, 2], [3, 4]]) == [Fraction(0)] * 2


def test_solve_in_span_hand_example():
    gens = [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 0, 2]]
    coeffs = linalg.solve_in_span([0, 1, 1, 0], gens)
    assert coeffs == [Fraction(0), Fraction(1), Fraction(0)]


def test_solve_in_span_not_in_span():
    assert linalg.solve_in_span([0, 0, 1], [[1, 0, 0], [0, 1, 0]]) is None


def test_solve_in_span_dimension_mismatch():
    with pytest.raises(InvalidInput):
        linalg.solve_in_span([1, 0], [[1, 0, 0]])


def test_solve_in_span_residual_property():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n, m = int(rng.integers(2, 7)), int(rng.integers(1, 4))
        gens = [[Fraction(int(v), int(rng.integers(1, 4)))
                 for v in rng.integers(-5, 6, size=n)] for _ in range(m)]
        coeffs = [Fraction(int(v)) for v in rng.integers(-3, 4, size=m)]
        target = [sum(c * g[i] for c, g in zip(coeffs, gens))
                  for i in range(n)]
        got = linalg.solve_in_span(target, gens)
        assert got is not None
        recombined = [sum(c * g[i] for c, g in zip(got, gens))
                      for i in range(n)]
        assert recombined == target


def test_exact_rank_is_deterministic_and_matches_oracle():
    rng = np.random.default_rng(17)
    for _ in range(200):
        nr, nc = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        r = int(rng.integers(0, min(nr, nc) + 1))
        left = rng.integers(-3, 4, size=(nr, r))
        right = rng.integers(-3, 4, size=(r, nc))
        m = [[int(v) for v in row] for row in (left @ right)]
        expected = minor_rank(m)
        assert linalg.mat_rank(m) == expected
        assert linalg.mat_rank(m) == expected  # repeatable


def test_exact_vs_numeric_rank_agreement():
    rng = np.random.default_rng(23)
    for _ in range(200):
        nr, nc = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        r = int(rng.integers(0, min(nr, nc) + 1))
        left = rng.integers(-5, 6, size=(nr, r))
        right = rng.integers(-5, 6, size=(r, nc))
        prod = left @ right
        exact = [[Fraction(int(v), 3) for v in row] for row in prod]
        numeric = (prod.astype(complex) / 3).tolist()
        assert linalg.mat_rank(exact) == linalg.mat_rank(numeric)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3),
                min_size=1, max_size=5))
def test_rank_bounded_by_dims_and_kernel_complements(rows):
    rank = linalg.mat_rank(rows)
    kern = linalg.kernel_basis(rows)
    assert 0 <= rank <= min(len(rows), 3)
    assert rank + len(kern) == 3


def test_invert_exact_round_trip():
    m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    inv = linalg.invert_exact(m)
    prod = [[sum(m[i][k] * inv[k][j] for k in range(2)) for j in range(2)]
            for i in range(2)]
    assert prod == [[1, 0], [0, 1]]


def test_invert_exact_singular():
    with pytest.raises(InvalidInput):
        linalg.invert_exact([[1, 2], [2, 4]])
