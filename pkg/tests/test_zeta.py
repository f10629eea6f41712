from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

import kn_oracles
from knzeta import ratpoly
from knzeta.arrangement import Arrangement, SVariable, kn_dense_affine, kn_flats, kn_variables
from knzeta.errors import DomainDegenerateError, MalformedInputError, UnsupportedDomainError
from knzeta.ratpoly import AffineForm
from knzeta.zeta import (
    Atom,
    ConvergenceCondition,
    Domain,
    contributes,
    general_conditions,
    general_polar_report,
    hypercube_point,
    i0_filter,
    independence_witness,
    kn_conditions,
    polar_report,
    span_is_centre,
    verify_witness,
)


def as_triples(conds):
    return {(c.support, c.bound, c.sense) for c in conds}


def contributing(report):
    return {(r.condition.support, r.condition.bound) for r in report.contributing}


FIG5 = Domain.from_atoms(2, [Atom("ge0", 1), Atom("ge", 2, 1)])


# -- conditions --------------------------------------------------------------------

def test_n2_conditions_verbatim():
    got = {(frozenset(map(str, c.support)), c.bound, c.sense) for c in kn_conditions(2)}
    assert got == kn_oracles.example_n2()


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_conditions_match_formulas(N):
    conds = kn_conditions(N)
    assert len(conds) == 2 ** (N + 2) - N - 4
    assert as_triples(conds) == kn_oracles.all_kn(N)


def test_condition_text():
    c = ConvergenceCondition({SVariable.zero(1), SVariable.zero(2)}, -2)
    assert str(c) == "Re(s01) + Re(s02) > -2"
    with pytest.raises(MalformedInputError):
        ConvergenceCondition({SVariable.zero(1)}, 0)


def test_conditions_are_canonically_ordered():
    flats = kn_flats(3)
    assert [e.sort_key() for e in flats] == sorted(e.sort_key() for e in flats)


# -- polar reports -------------------------------------------------------------------

@pytest.mark.parametrize("N", [2, 3, 4])
def test_whole_space_everything_contributes(N):
    rep = polar_report(N, Domain.whole(N))
    assert len(rep.contributing) == len(rep.records) == 2 ** (N + 2) - N - 4


@pytest.mark.parametrize("N", [2, 3, 4])
def test_simplex_report(N):
    rep = polar_report(N, Domain.simplex(N))
    assert contributing(rep) == kn_oracles.simplex_list(N)
    assert len(rep.contributing) == N * (N + 3) // 2


def test_simplex2_flats_by_name():
    rep = polar_report(2, Domain.simplex(2))
    names = {str(r.flat) for r in rep.contributing}
    assert names == {"{x1 = 0}", "{x2 - 1 = 0}", "{x1 - x2 = 0}",
                     "{x1 = 0, x2 = 0}", "{x1 - 1 = 0, x2 - 1 = 0}"}
    dims = {str(r.flat): r.intersection_dim for r in rep.records}
    assert dims["{x1 - 1 = 0}"] == 0 and dims["{x2 = 0}"] == 0


def test_half_cone_domain():
    rep = polar_report(2, FIG5)
    missing = {str(r.flat) for r in rep.records if not r.contributes}
    assert missing == {"{x2 = 0}", "{z1 = 0}"}


@pytest.mark.parametrize("N", [2, 3, 4])
def test_cube_i0(N):
    rep = i0_filter(polar_report(N, Domain.cube(N)))
    assert rep.variant == "i0"
    assert contributing(rep) == kn_oracles.cube_i0_list(N)


@pytest.mark.parametrize("N", [2, 3])
def test_cube_keeps_all_affine(N):
    rep = polar_report(N, Domain.cube(N))
    assert len(rep.contributing) == 3 * 2 ** N - N - 3


def test_gamma_skeleton_and_families():
    rep = polar_report(2, FIG5)
    names = [str(g) for g in rep.gamma_factors]
    assert "Γ(s01+s02+s12+2)" in names
    assert "Γ(-s01-s02-s12-s13-s23-2)" in names
    fams = {str(p.condition): p for p in rep.pole_families}
    inf = fams["Re(s01) + Re(s02) + Re(s12) + Re(s13) + Re(s23) < -2"]
    assert [inf.member(t) for t in range(3)] == [-2, -1, 0]
    aff = fams["Re(s01) > -1"]
    assert [aff.member(t) for t in range(3)] == [-1, -2, -3]


def test_degenerate_domain_rejected():
    with pytest.raises(DomainDegenerateError):
        Domain.from_atoms(2, [Atom("ge0", 1), Atom("le0", 1)])
    with pytest.raises(MalformedInputError):
        Domain.from_atoms(2, [Atom("ge0", 3)])


def test_general_arrangement_reports():
    A = Arrangement.general([AffineForm([1, 0], 0), AffineForm([0, 1], 0),
                             AffineForm([1, 1], -1)], ["a", "b", "c"])
    tri = Domain.general(2, [AffineForm([1, 0], 0), AffineForm([0, 1], 0),
                             AffineForm([-1, -1], 1)])
    rep = general_polar_report(A, tri)
    # corners are normal crossings, hence not dense; the three sides contribute
    assert len(rep.records) == len(general_conditions(A)) == 3
    assert len(rep.contributing) == 3
    # a triple point is dense and gives sum > -2
    B = Arrangement.general([AffineForm([1, 0], 0), AffineForm([0, 1], 0),
                             AffineForm([1, -1], 0)], ["a", "b", "c"])
    rep = general_polar_report(B, tri)
    point = [r for r in rep.records if r.flat_dim == 0]
    assert len(point) == 1 and point[0].contributes and point[0].condition.bound == -2
    quadrant = Domain.general(2, [AffineForm([1, 0], 0), AffineForm([0, 1], 0)])
    with pytest.raises(UnsupportedDomainError):
        general_polar_report(A, quadrant)


def test_general_unbounded_infinity_unsupported():
    D = Domain.general(2, [AffineForm([1, 0], 0)])
    inf = [e for e in kn_flats(2) if not e.is_affine][0]
    with pytest.raises(UnsupportedDomainError):
        contributes(inf, D)


# -- trace dimension against polygon geometry ------------------------------------------

def line_trace_dim(form, verts):
    vals = [form(v) for v in verts]
    if sum(1 for v in vals if v == 0) >= 2 or (min(vals) < 0 < max(vals)):
        return 1
    return 0 if 0 in vals else -1


def random_domains(N, count, seed):
    rng = random.Random(seed)
    atoms = [Atom(t, i) for t in ("ge0", "le0", "ge1", "le1") for i in range(1, N + 1)]
    atoms += [Atom("ge", i, j) for i in range(1, N + 1) for j in range(1, N + 1) if i != j]
    out, seen = [], set()
    for _ in range(5000):
        if len(out) == count:
            break
        pick = tuple(sorted(rng.sample(range(len(atoms)), rng.randint(1, 2 * N + 1))))
        if pick in seen:
            continue
        seen.add(pick)
        try:
            out.append(Domain.from_atoms(N, [atoms[k] for k in pick]))
        except DomainDegenerateError:
            continue
    assert len(out) == count
    return out


BOX = [(1, 0, 1), (-1, 0, 2), (0, 1, 1), (0, -1, 2)]
rows2 = st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-3, 3)),
                 max_size=3)


@settings(max_examples=40)
@given(rows2)
def test_affine_traces_match_polygon_oracle(rows):
    rows = rows + BOX
    from conftest import vertices2
    verts = vertices2(rows)
    try:
        D = Domain.general(2, [AffineForm(r[:2], r[2]) for r in rows])
    except DomainDegenerateError:
        return
    for e in kn_dense_affine(2):
        c = contributes(e, D)
        if e.dim == 1:
            assert c.intersection_dim == line_trace_dim(e.flat.equations[0], verts)
        else:
            point = tuple(-eq.constant for eq in e.flat.equations)
            assert c.intersection_dim == (0 if D.polyhedron.contains(point) else -1)


@pytest.mark.parametrize("N", [2, 3])
def test_lower_dimensional_traces_span_centres(N):
    centres = {e.flat for e in kn_dense_affine(N)}
    for D in random_domains(N, 12, seed=N):  # 24 domains over both N
        for e in kn_dense_affine(N):
            c = contributes(e, D)
            if 0 <= c.intersection_dim < e.dim:
                assert span_is_centre(e, D)
                hull = ratpoly.affine_hull(D.polyhedron.with_equalities(e.flat.equations))
                assert hull in centres


# -- witnesses ------------------------------------------------------------------------

@pytest.mark.parametrize("N", [2, 3, 4])
def test_witnesses(N):
    conds = kn_conditions(N)
    for c in conds:
        w = independence_witness(N, c)
        assert c.value(w.assignment) == c.bound
        assert verify_witness(w, conds, c)
        assert all(isinstance(q, Fraction) for q in w.assignment.values())


def test_witness_example_values():
    target = ConvergenceCondition({SVariable.zero(1)}, -1)
    w = independence_witness(2, target)
    assert w[SVariable.zero(1)] == -1
    assert {w[v] for v in kn_variables(2) if v != SVariable.zero(1)} == {Fraction(-3, 8)}


def test_witness_rejects_unknown_condition():
    with pytest.raises(MalformedInputError):
        independence_witness(2, ConvergenceCondition({SVariable.zero(1)}, -2))


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 6])
def test_hypercube_point(N):
    p = hypercube_point(N)
    lo, hi = Fraction(-2, N + 1), Fraction(-2, N + 3)
    assert all(lo < q < hi for q in p.assignment.values())
    assert all(c.holds(p.assignment) for c in kn_conditions(N))
