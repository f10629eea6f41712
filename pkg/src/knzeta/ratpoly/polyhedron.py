"""Polyhedra given by rational linear constraints, and exact queries on them.

All indices here are 0-based coordinate positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from ..errors import DimensionMismatchError, EmptyPolyhedronError
from . import simplex
from .linalg import AffineForm, Vector, rank, rref


@dataclass(frozen=True)
class Polyhedron:
    """{x in R^n : f(x) >= 0 for f in inequalities, g(x) == 0 for g in equalities}."""

    ambient_dim: int
    inequalities: tuple[AffineForm, ...] = ()
    equalities: tuple[AffineForm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        object.__setattr__(self, "equalities", tuple(self.equalities))
        for f in self.inequalities + self.equalities:
            if f.dim != self.ambient_dim:
                raise DimensionMismatchError(
                    f"form on R^{f.dim} in polyhedron of R^{self.ambient_dim}")

    def with_equalities(self, forms: Iterable[AffineForm]) -> "Polyhedron":
        return Polyhedron(self.ambient_dim, self.inequalities,
                          self.equalities + tuple(forms))

    def with_inequalities(self, forms: Iterable[AffineForm]) -> "Polyhedron":
        return Polyhedron(self.ambient_dim, self.inequalities + tuple(forms),
                          self.equalities)

    def contains(self, x: Sequence) -> bool:
        return (all(f(x) >= 0 for f in self.inequalities)
                and all(g(x) == 0 for g in self.equalities))


@dataclass(frozen=True)
class Flat:
    """Affine subspace {x : e(x) == 0 for e in equations}.

    ``equations`` is kept in canonical form: the reduced row echelon form of
    the augmented system, so two Flats are equal iff they are the same set.
    """

    ambient_dim: int
    equations: tuple[AffineForm, ...] = field(default=())

    @classmethod
    def from_equations(cls, ambient_dim: int, forms: Iterable[AffineForm]) -> "Flat | None":
        """Canonical flat cut out by ``forms``; None when the system is inconsistent."""
        forms = list(forms)
        for f in forms:
            if f.dim != ambient_dim:
                raise DimensionMismatchError(
                    f"equation on R^{f.dim} for flat in R^{ambient_dim}")
        # a pivot in the constant column means 0 == nonzero
        red, piv = rref([f.augmented() for f in forms])
        if ambient_dim in piv:
            return None
        eqs = tuple(AffineForm(r[:ambient_dim], r[ambient_dim]) for r in red)
        return cls(ambient_dim, eqs)

    @classmethod
    def whole(cls, ambient_dim: int) -> "Flat":
        return cls(ambient_dim, ())

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    def key(self) -> tuple:
        return tuple(e.augmented() for e in self.equations)

    def intersect(self, forms: Iterable[AffineForm]) -> "Flat | None":
        return Flat.from_equations(self.ambient_dim, self.equations + tuple(forms))

    def contains_form(self, form: AffineForm) -> bool:
        """True iff the hyperplane form == 0 contains this flat."""
        return self.intersect([form]) == self

    def contains_point(self, x: Sequence) -> bool:
        return all(e(x) == 0 for e in self.equations)

    def as_polyhedron(self) -> Polyhedron:
        return Polyhedron(self.ambient_dim, (), self.equations)

    def __str__(self) -> str:
        if not self.equations:
            return f"R^{self.ambient_dim}"
        return "{" + ", ".join(f"{e} = 0" for e in self.equations) + "}"


def lp_feasible(P: Polyhedron) -> bool:
    return simplex.feasible_point(P.ambient_dim, P.inequalities, P.equalities) is not None


def feasible_point(P: Polyhedron) -> Vector | None:
    return simplex.feasible_point(P.ambient_dim, P.inequalities, P.equalities)


def maximize(objective: AffineForm, P: Polyhedron) -> simplex.LPResult:
    return simplex.maximize(objective, P.inequalities, P.equalities)


def implicit_equalities(P: Polyhedron) -> list[AffineForm] | None:
    """Inequalities of P that vanish identically on P; None if P is empty.

    An inequality f >= 0 is implicit iff max f over P is 0. Each optimum
    point found also certifies the inequalities it leaves strictly positive.
    """
    x0 = feasible_point(P)
    if x0 is None:
        return None
    loose = [f(x0) > 0 for f in P.inequalities]
    for k, f in enumerate(P.inequalities):
        if loose[k]:
            continue
        res = maximize(f, P)
        if res.status == simplex.UNBOUNDED or res.value > 0:
            loose[k] = True
            if res.point is not None:
                for m, g in enumerate(P.inequalities):
                    if not loose[m] and g(res.point) > 0:
                        loose[m] = True
    return [f for f, lo in zip(P.inequalities, loose) if not lo]


def dim(P: Polyhedron) -> int:
    """Dimension of P, or -1 when P is empty."""
    imp = implicit_equalities(P)
    if imp is None:
        return -1
    rows = [f.coeffs for f in imp] + [g.coeffs for g in P.equalities]
    return P.ambient_dim - rank(rows)


def dim_intersection(Z: Flat, P: Polyhedron) -> int:
    if Z.ambient_dim != P.ambient_dim:
        raise DimensionMismatchError(
            f"flat in R^{Z.ambient_dim} against polyhedron in R^{P.ambient_dim}")
    return dim(P.with_equalities(Z.equations))


def affine_hull(P: Polyhedron) -> Flat:
    imp = implicit_equalities(P)
    if imp is None:
        raise EmptyPolyhedronError("affine hull of an empty polyhedron")
    flat = Flat.from_equations(P.ambient_dim, list(imp) + list(P.equalities))
    assert flat is not None
    return flat


def is_bounded(P: Polyhedron) -> bool:
    """True iff P is nonempty and bounded."""
    return coordinate_bounds(P) is not None


def coordinate_bounds(P: Polyhedron) -> list[tuple[Fraction, Fraction]] | None:
    """Exact [min, max] of every coordinate over P; None if P is empty or unbounded."""
    n = P.ambient_dim
    box = []
    for i in range(n):
        hi = maximize(AffineForm.coordinate(n, i), P)
        if hi.status != simplex.OPTIMAL:
            return None
        lo = maximize(AffineForm.coordinate(n, i, scale=-1), P)
        if lo.status != simplex.OPTIMAL:
            return None
        box.append((-lo.value, hi.value))
    return box


# -- Fourier-Motzkin projection ------------------------------------------------

def _is_redundant(f: AffineForm, others: Sequence[AffineForm],
                  equalities: Sequence[AffineForm]) -> bool:
    res = simplex.maximize(-f, others, equalities)
    if res.status == simplex.INFEASIBLE:
        return True
    return res.status == simplex.OPTIMAL and res.value <= 0


def _prune(ineqs: list[AffineForm], equalities: Sequence[AffineForm]) -> list[AffineForm]:
    seen = {}
    for f in ineqs:
        g = f.normalized()
        if g.is_constant():
            if g.constant >= 0:
                continue  # trivially true
            return [g]  # infeasible system, keep the witness only
        seen.setdefault(g.augmented(), g)
    kept = list(seen.values())
    i = 0
    while i < len(kept):
        if _is_redundant(kept[i], kept[:i] + kept[i + 1:], equalities):
            del kept[i]
        else:
            i += 1
    return kept


def eliminate(P: Polyhedron, var: int) -> Polyhedron:
    """Project out coordinate ``var``; the result keeps ambient_dim with
    ``var`` absent from every form."""
    n = P.ambient_dim
    eqs = list(P.equalities)
    pivot = next((g for g in eqs if g.coeffs[var] != 0), None)
    if pivot is not None:
        # substitute x_var from the equality into everything else
        c = pivot.coeffs[var]

        def sub(f: AffineForm) -> AffineForm:
            return f - pivot.scaled(f.coeffs[var] / c)

        new_eqs = [sub(g) for g in eqs if g is not pivot]
        new_eqs = [g for g in new_eqs if not (g.is_constant() and g.constant == 0)]
        new_ineqs = [sub(f) for f in P.inequalities]
        return Polyhedron(n, _prune(new_ineqs, new_eqs), new_eqs)
    pos, neg, zero = [], [], []
    for f in P.inequalities:
        c = f.coeffs[var]
        (pos if c > 0 else neg if c < 0 else zero).append(f)
    combined = list(zero)
    for f in pos:
        for g in neg:
            combined.append(f.scaled(-g.coeffs[var]) + g.scaled(f.coeffs[var]))
    return Polyhedron(n, _prune(combined, eqs), eqs)


def _restrict(P: Polyhedron, keep: Sequence[int]) -> Polyhedron:
    def cut(f: AffineForm) -> AffineForm:
        return AffineForm(tuple(f.coeffs[i] for i in keep), f.constant)
    return Polyhedron(len(keep), [cut(f) for f in P.inequalities],
                      [cut(g) for g in P.equalities])


def project(P: Polyhedron, keep: Iterable[int]) -> Polyhedron:
    """Orthogonal projection of P onto the coordinates ``keep`` (sorted)."""
    keep = sorted(set(keep))
    for i in keep:
        if not 0 <= i < P.ambient_dim:
            raise DimensionMismatchError(f"coordinate {i} outside R^{P.ambient_dim}")
    Q = P
    for var in range(P.ambient_dim):
        if var not in keep:
            Q = eliminate(Q, var)
    return _restrict(Q, keep)


def projection_dim(P: Polyhedron, keep: Iterable[int]) -> int:
    if not lp_feasible(P):
        return -1
    return dim(project(P, keep))


# -- recession cone ------------------------------------------------------------

def recession_cone(P: Polyhedron) -> Polyhedron:
    n = P.ambient_dim
    zero = Fraction(0)
    return Polyhedron(n, [AffineForm(f.coeffs, zero) for f in P.inequalities],
                      [AffineForm(g.coeffs, zero) for g in P.equalities])


def recession_direction(P: Polyhedron, J: Iterable[int], sigma: Sequence[int]) -> Vector | None:
    """A direction v of the recession cone with v_j = 0 off J and
    sigma_i * v_i >= 1 on J (J sorted, sigma aligned with it), or None."""
    J = sorted(set(J))
    if not J:
        raise ValueError("J must be nonempty")
    if len(sigma) != len(J):
        raise DimensionMismatchError("sign vector must align with J")
    if not lp_feasible(P):
        raise EmptyPolyhedronError("recession test on an empty polyhedron")
    n = P.ambient_dim
    C = recession_cone(P)
    off = [AffineForm.coordinate(n, j) for j in range(n) if j not in J]
    push = [AffineForm.coordinate(n, i, scale=s, constant=-1) for i, s in zip(J, sigma)]
    C = C.with_equalities(off).with_inequalities(push)
    return feasible_point(C)


def recession_direction_exists(P: Polyhedron, J: Iterable[int], sigma: Sequence[int]) -> bool:
    return recession_direction(P, J, sigma) is not None


def sign_patterns(k: int) -> Iterable[tuple[int, ...]]:
    return product((1, -1), repeat=k)
