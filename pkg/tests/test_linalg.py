from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from knzeta.errors import DimensionMismatchError
from knzeta.ratpoly import AffineForm, rank, rref, to_fraction, vector
from knzeta.ratpoly.linalg import solve_combination

small = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=1, max_size=max_rows))


def det(m):
    if len(m) == 1:
        return Fraction(m[0][0])
    return sum((-1) ** c * m[0][c] * det([row[:c] + row[c + 1:] for row in m[1:]])
               for c in range(len(m)))


def rank_by_minors(m):
    """Largest k with a nonzero k x k minor."""
    rows, cols = len(m), len(m[0])
    for k in range(min(rows, cols), 0, -1):
        for r in combinations(range(rows), k):
            for c in combinations(range(cols), k):
                if det([[m[i][j] for j in c] for i in r]) != 0:
                    return k
    return 0


def test_to_fraction_refuses_floats():
    with pytest.raises(TypeError):
        to_fraction(0.5)
    assert to_fraction("3/4") == Fraction(3, 4)
    assert vector([1, "1/2"]) == (Fraction(1), Fraction(1, 2))


def test_rank_examples():
    assert rank([[1, 0], [0, 1], [1, -1]]) == 2
    assert rank([[0, 0, 0]]) == 0
    assert rank([[1, 2], [2, 4]]) == 1


def test_ragged_rows_rejected():
    with pytest.raises(DimensionMismatchError):
        rank([[1, 2], [3]])


@given(matrices(4, 4))
def test_rank_matches_minors(m):
    assert rank(m) == rank_by_minors(m)


@given(matrices())
def test_rref_is_reduced_and_same_rank(m):
    red, piv = rref(m)
    assert len(red) == len(piv) == rank(m)
    for r, p in zip(red, piv):
        assert r[p] == 1
        assert all(other[p] == 0 for other in red if other is not r)
    assert piv == sorted(piv)
    # row space is preserved
    assert rank([list(r) for r in red] + m) == rank(m)


@given(matrices(4, 4), st.lists(small, min_size=4, max_size=4))
def test_solve_combination(m, coeffs):
    basis = [tuple(Fraction(x) for x in r) for r in m]
    n = len(basis[0])
    target = tuple(sum(c * b[k] for c, b in zip(coeffs, basis)) for k in range(n))
    sol = solve_combination(basis, target)
    if rank(m) == len(m):
        assert sol is not None
        assert tuple(sum(c * b[k] for c, b in zip(sol, basis)) for k in range(n)) == target


def test_affine_form_arithmetic():
    f = AffineForm([1, -1], 2)
    g = AffineForm.coordinate(2, 1, scale=3, constant=-1)
    assert f((1, 1)) == 2
    assert (f + g).coeffs == (1, 2) and (f + g).constant == 1
    assert (f - f).is_constant()
    assert (-f).normalized() == AffineForm([1, -1], 2).scaled(-1)
    assert f.scaled(2).projective_key() == f.projective_key()
    assert str(AffineForm([1, -1], 0)) == "x1 - x2"


def test_affine_form_dimension_check():
    with pytest.raises(DimensionMismatchError):
        AffineForm([1, 0], 0) + AffineForm([1], 0)
