from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from knzeta.arrangement import (
    Arrangement,
    SVariable,
    dense_edges,
    edges,
    edges_by_subsets,
    kn_arrangement,
    kn_dense_affine,
    kn_diag_flat,
    kn_infinity_flats,
    kn_variables,
    matroid_components,
)
from knzeta.errors import MalformedInputError
from knzeta.ratpoly import AffineForm, rank


def circuit_components(vecs):
    """Matroid components from an explicit list of all circuits (2^n oracle)."""
    n = len(vecs)
    circuits = []
    for r in range(1, n + 1):
        for S in combinations(range(n), r):
            dep = rank([vecs[i] for i in S]) < len(S)
            if dep and not any(set(C) <= set(S) for C in circuits):
                circuits.append(S)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for C in circuits:
        for a in C[1:]:
            parent[find(a)] = find(C[0])
    blocks = {}
    for k in range(n):
        blocks.setdefault(find(k), []).append(k)
    return sorted(blocks.values())


vec3 = st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=1, max_size=6)


@given(vec3)
def test_components_match_circuit_oracle(vecs):
    assert matroid_components(vecs) == circuit_components(vecs)


@given(vec3)
def test_rank_is_additive_over_components(vecs):
    blocks = matroid_components(vecs)
    assert sum(rank([vecs[i] for i in b]) for b in blocks) == rank(vecs)


def test_components_examples():
    # e1, e2, e1 - e2 is connected although no pair of them is dependent
    assert matroid_components([[1, 0], [0, 1], [1, -1]]) == [[0, 1, 2]]
    assert matroid_components([[1, 0], [0, 1]]) == [[0], [1]]
    assert matroid_components([[1, 0], [2, 0], [0, 1]]) == [[0, 1], [2]]


# -- variables -------------------------------------------------------------------

@pytest.mark.parametrize("N", [1, 2, 3, 9, 11])
def test_svariable_round_trip(N):
    names = [str(v) for v in kn_variables(N)]
    assert len(set(names)) == len(names) == N * (N + 3) // 2
    assert [SVariable.parse(s, N) for s in names] == kn_variables(N)


def test_svariable_labels_for_n2():
    assert [str(v) for v in kn_variables(2)] == ["s01", "s02", "s12", "s13", "s23"]
    with pytest.raises(MalformedInputError):
        SVariable.parse("s14", 2)
    with pytest.raises(MalformedInputError):
        SVariable.parse("x01", 2)


def test_arrangement_validation():
    with pytest.raises(MalformedInputError):
        Arrangement.general([AffineForm([1, 0], 0), AffineForm([2, 0], 0)])
    with pytest.raises(MalformedInputError):
        Arrangement.general([AffineForm([1, 0], 0), AffineForm([0, 1], 0)], ["a", "a"])
    with pytest.raises(MalformedInputError):
        Arrangement.general([AffineForm([0, 0], 1)])


# -- edges -------------------------------------------------------------------------

def _general(rows):
    seen, forms = set(), []
    for r in rows:
        f = AffineForm(r[:-1], r[-1])
        if f.is_constant() or f.projective_key() in seen:
            continue
        seen.add(f.projective_key())
        forms.append(f)
    return Arrangement.general(forms) if forms else None


FIXED = [
    kn_arrangement(1), kn_arrangement(2), kn_arrangement(3),
    # braid arrangement in R^3 and a generic line arrangement
    Arrangement.general([AffineForm([1, -1, 0], 0), AffineForm([1, 0, -1], 0),
                         AffineForm([0, 1, -1], 0)]),
    Arrangement.general([AffineForm([1, 0], 0), AffineForm([0, 1], 0),
                         AffineForm([1, 1], -1), AffineForm([1, -1], 2)]),
    # three coordinate planes plus a parallel plane
    Arrangement.general([AffineForm([1, 0, 0], 0), AffineForm([0, 1, 0], 0),
                         AffineForm([0, 0, 1], 0), AffineForm([1, 0, 0], -1)]),
]


@pytest.mark.parametrize("A", FIXED, ids=lambda A: A.ident)
def test_edges_agree_with_subset_scan(A):
    assert len(A.hyperplanes) <= 12
    assert edges(A) == edges_by_subsets(A)


@given(st.lists(st.lists(st.integers(-2, 2), min_size=4, max_size=4), min_size=1, max_size=7))
def test_edges_agree_on_random_arrangements(rows):
    A = _general(rows)
    if A is not None:
        assert edges(A) == edges_by_subsets(A)


@pytest.mark.parametrize("N, total, dense", [(1, 2, 2), (2, 9, 7), (3, 36, 18)])
def test_kn_edge_counts(N, total, dense):
    A = kn_arrangement(N)
    assert len(edges(A)) == total
    assert len(dense_edges(A)) == dense == 3 * 2 ** N - N - 3


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_dense_edges_match_closed_form(N):
    assert set(dense_edges(kn_arrangement(N))) == set(kn_dense_affine(N))


def test_non_dense_edge():
    # {x1 = x2, x3 = 0} splits into a diagonal and a coordinate factor
    A = kn_arrangement(3)
    dense = set(dense_edges(A))
    all_edges = edges(A)
    split = [e for e in all_edges
             if e.containing == {SVariable.diag(1, 2), SVariable.zero(3)}]
    assert split and split[0] not in dense
    assert kn_diag_flat(3, [1, 2, 3]) in dense


def test_single_hyperplane_is_dense():
    A = Arrangement.general([AffineForm([1, 2], -3)])
    assert len(dense_edges(A)) == 1


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_infinity_flats(N):
    inf = kn_infinity_flats(N)
    assert len(inf) == 2 ** N - 1
    assert all(not e.is_affine and e.dim == N - len(e.infinity) for e in inf)
