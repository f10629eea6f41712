"""Koba-Nielsen arrangements, edges and dense edges of rational arrangements.

KN coordinates and labels are 1-based, following the usual s_{0i},
s_{i(N+1)}, s_{ij} naming; ratpoly indices stay 0-based underneath.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import MalformedInputError
from .ratpoly import AffineForm, Flat
from .ratpoly.linalg import Vector, solve_combination

ZERO, ONE, DIAG, GENERAL = "zero", "one", "diag", "general"


@dataclass(frozen=True, order=True)
class SVariable:
    """Exponent variable attached to one hyperplane.

    KN variables are stored by their conventional index pair (i, j):
    zero(i) -> (0, i), one(i) -> (i, N+1), diag(i, j) -> (i, j).
    General-arrangement variables use (index, 0) plus a display name.
    """

    i: int
    j: int
    kind: str = DIAG
    name: str | None = field(default=None, compare=False)

    @classmethod
    def zero(cls, i: int) -> "SVariable":
        return cls(0, i, ZERO)

    @classmethod
    def one(cls, i: int, N: int) -> "SVariable":
        return cls(i, N + 1, ONE)

    @classmethod
    def diag(cls, i: int, j: int) -> "SVariable":
        if not i < j:
            i, j = j, i
        if i == j:
            raise MalformedInputError("diagonal variable needs i != j")
        return cls(i, j, DIAG)

    @classmethod
    def general(cls, index: int, name: str | None = None) -> "SVariable":
        return cls(index, 0, GENERAL, name)

    @classmethod
    def parse(cls, text: str, N: int) -> "SVariable":
        """Inverse of ``str`` for KN variables of the N-point arrangement."""
        m = re.fullmatch(r"s(\d+)_(\d+)", text) or re.fullmatch(r"s(\d)(\d)", text)
        if m is None:
            raise MalformedInputError(f"not a KN variable: {text!r}")
        i, j = int(m.group(1)), int(m.group(2))
        if i == 0 and 1 <= j <= N:
            return cls.zero(j)
        if j == N + 1 and 1 <= i <= N:
            return cls.one(i, N)
        if 1 <= i < j <= N:
            return cls.diag(i, j)
        raise MalformedInputError(f"{text!r} is not a variable for N={N}")

    def __str__(self) -> str:
        if self.kind == GENERAL:
            return self.name if self.name is not None else f"s{self.i}"
        if self.i < 10 and self.j < 10:
            return f"s{self.i}{self.j}"
        return f"s{self.i}_{self.j}"


def kn_variables(N: int) -> list[SVariable]:
    """All N(N+3)/2 KN variables in sorted order (s01, s02, s12, s13, s23 for N=2)."""
    out = [SVariable.zero(i) for i in range(1, N + 1)]
    out += [SVariable.one(i, N) for i in range(1, N + 1)]
    out += [SVariable.diag(i, j) for i, j in combinations(range(1, N + 1), 2)]
    return sorted(out)


@dataclass(frozen=True)
class Hyperplane:
    form: AffineForm
    label: SVariable

    def __post_init__(self):
        if self.form.is_constant():
            raise MalformedInputError(f"hyperplane {self.label} has zero linear part")


@dataclass(frozen=True)
class Arrangement:
    ambient_dim: int
    hyperplanes: tuple[Hyperplane, ...]
    kind: str = GENERAL
    N: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "hyperplanes", tuple(self.hyperplanes))
        labels = set()
        keys = set()
        for h in self.hyperplanes:
            if h.form.dim != self.ambient_dim:
                raise MalformedInputError(
                    f"hyperplane {h.label} lives in R^{h.form.dim}, not R^{self.ambient_dim}")
            if h.label in labels:
                raise MalformedInputError(f"duplicate label {h.label}")
            key = h.form.projective_key()
            if key in keys:
                raise MalformedInputError(f"hyperplane {h.label} repeats an earlier one")
            labels.add(h.label)
            keys.add(key)

    @classmethod
    def general(cls, forms: Sequence[AffineForm], labels: Sequence[str] | None = None) -> "Arrangement":
        if not forms:
            raise MalformedInputError("an arrangement needs at least one hyperplane")
        n = forms[0].dim
        if labels is None:
            labels = [None] * len(forms)
        hs = [Hyperplane(f, SVariable.general(k, lab))
              for k, (f, lab) in enumerate(zip(forms, labels), start=1)]
        names = [str(h.label) for h in hs]
        if len(set(names)) != len(names):
            raise MalformedInputError("hyperplane labels must be unique")
        return cls(n, tuple(hs), GENERAL)

    @property
    def ident(self) -> str:
        return f"kn({self.N})" if self.kind == "kn" else f"general({len(self.hyperplanes)})"

    def labels(self) -> list[SVariable]:
        return [h.label for h in self.hyperplanes]


@dataclass(frozen=True)
class EdgeFlat:
    """An edge of an arrangement or, when ``infinity`` is set, the flat
    {z_j = 0 : j in infinity} at infinity of (P^1)^N.

    ``containing`` lists every hyperplane containing an affine edge. It is
    empty for flats at infinity, which are described by J alone.
    """

    ambient_dim: int
    flat: Flat | None
    containing: frozenset = frozenset()
    infinity: frozenset | None = None

    @property
    def locus(self) -> str:
        return "infinity" if self.infinity is not None else "affine"

    @property
    def is_affine(self) -> bool:
        return self.infinity is None

    @property
    def dim(self) -> int:
        if self.infinity is not None:
            return self.ambient_dim - len(self.infinity)
        return self.flat.dim

    def sort_key(self) -> tuple:
        if self.infinity is not None:
            return (self.dim, 1, tuple(sorted(self.infinity)))
        return (self.dim, 0, self.flat.key())

    def __str__(self) -> str:
        if self.infinity is not None:
            return "{" + ", ".join(f"z{j} = 0" for j in sorted(self.infinity)) + "}"
        return str(self.flat)


def sort_flats(flats: Iterable[EdgeFlat]) -> list[EdgeFlat]:
    return sorted(flats, key=EdgeFlat.sort_key)


# -- Koba-Nielsen arrangement ---------------------------------------------------

def kn_arrangement(N: int) -> Arrangement:
    if N < 1:
        raise MalformedInputError("the KN arrangement needs N >= 1")
    hs = []
    for i in range(1, N + 1):
        hs.append(Hyperplane(AffineForm.coordinate(N, i - 1), SVariable.zero(i)))
    for i in range(1, N + 1):
        hs.append(Hyperplane(AffineForm.coordinate(N, i - 1, scale=-1, constant=1),
                             SVariable.one(i, N)))
    for i, j in combinations(range(1, N + 1), 2):
        c = [0] * N
        c[i - 1], c[j - 1] = 1, -1
        hs.append(Hyperplane(AffineForm(c, 0), SVariable.diag(i, j)))
    return Arrangement(N, tuple(hs), "kn", N)


def _edge(A: Arrangement, flat: Flat) -> EdgeFlat:
    containing = frozenset(h.label for h in A.hyperplanes if flat.contains_form(h.form))
    return EdgeFlat(A.ambient_dim, flat, containing)


def edges(A: Arrangement) -> list[EdgeFlat]:
    """All edges, by closing the hyperplanes under intersection with hyperplanes."""
    n = A.ambient_dim
    seen: dict[tuple, Flat] = {}
    frontier = []
    for h in A.hyperplanes:
        f = Flat.from_equations(n, [h.form])
        if f.key() not in seen:
            seen[f.key()] = f
            frontier.append(f)
    while frontier:
        nxt = []
        for f in frontier:
            for h in A.hyperplanes:
                g = f.intersect([h.form])
                if g is None or g == f or g.key() in seen:
                    continue
                seen[g.key()] = g
                nxt.append(g)
        frontier = nxt
    return sort_flats(_edge(A, f) for f in seen.values())


def edges_by_subsets(A: Arrangement) -> list[EdgeFlat]:
    """All edges by scanning every nonempty subset of hyperplanes (2^m work)."""
    n = A.ambient_dim
    seen: dict[tuple, Flat] = {}
    m = len(A.hyperplanes)
    for mask in range(1, 1 << m):
        forms = [A.hyperplanes[k].form for k in range(m) if mask >> k & 1]
        f = Flat.from_equations(n, forms)
        if f is not None:
            seen.setdefault(f.key(), f)
    return sort_flats(_edge(A, f) for f in seen.values())


# -- matroid components -------------------------------------------------------------

def matroid_components(normals: Sequence[Sequence]) -> list[list[int]]:
    """Connected components of the linear matroid on ``normals`` (0-based).

    Two elements share a component iff some circuit contains both. The
    fundamental circuits of one basis already generate this relation, so a
    union-find over them gives the finest rank-additive partition.
    """
    vecs = [tuple(v) for v in normals]
    if not vecs:
        raise ValueError("matroid_components needs at least one vector")
    parent = list(range(len(vecs)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    basis_idx: list[int] = []
    basis: list[Vector] = []
    for k, v in enumerate(vecs):
        if all(x == 0 for x in v):
            continue  # loop: its own component
        coeffs = solve_combination(basis, v) if basis else None
        if coeffs is None:
            basis_idx.append(k)
            basis.append(v)
            continue
        for b, c in zip(basis_idx, coeffs):
            if c != 0:
                parent[find(b)] = find(k)
    blocks: dict[int, list[int]] = {}
    for k in range(len(vecs)):
        blocks.setdefault(find(k), []).append(k)
    return sorted(blocks.values())


def is_dense(A: Arrangement, edge: EdgeFlat) -> bool:
    """Whether the local central arrangement at ``edge`` is indecomposable.

    Normals of hyperplanes through the edge already annihilate its direction
    space, so their matroid is the matroid of the essential arrangement.
    """
    normals = [h.form.coeffs for h in A.hyperplanes if h.label in edge.containing]
    return len(matroid_components(normals)) == 1


def dense_edges(A: Arrangement) -> list[EdgeFlat]:
    return [e for e in edges(A) if is_dense(A, e)]


# -- closed forms for A_N ------------------------------------------------------

def _kn_flat(N: int, forms: list[AffineForm], labels: Iterable[SVariable]) -> EdgeFlat:
    return EdgeFlat(N, Flat.from_equations(N, forms), frozenset(labels))


def kn_zero_flat(N: int, S: Iterable[int]) -> EdgeFlat:
    S = sorted(S)
    labels = [SVariable.zero(i) for i in S] + [SVariable.diag(i, j) for i, j in combinations(S, 2)]
    return _kn_flat(N, [AffineForm.coordinate(N, i - 1) for i in S], labels)


def kn_one_flat(N: int, S: Iterable[int]) -> EdgeFlat:
    S = sorted(S)
    labels = [SVariable.one(i, N) for i in S] + [SVariable.diag(i, j) for i, j in combinations(S, 2)]
    forms = [AffineForm.coordinate(N, i - 1, scale=-1, constant=1) for i in S]
    return _kn_flat(N, forms, labels)


def kn_diag_flat(N: int, S: Iterable[int]) -> EdgeFlat:
    S = sorted(S)
    forms = []
    for j in S[1:]:
        c = [0] * N
        c[S[0] - 1], c[j - 1] = 1, -1
        forms.append(AffineForm(c, 0))
    return _kn_flat(N, forms, [SVariable.diag(i, j) for i, j in combinations(S, 2)])


def kn_dense_affine(N: int) -> list[EdgeFlat]:
    """Components of A_N and the blow-up centres through 0 or 1: 3*2^N - N - 3 flats."""
    if N < 1:
        raise MalformedInputError("N must be >= 1")
    out = []
    idx = range(1, N + 1)
    for r in range(1, N + 1):
        for S in combinations(idx, r):
            out.append(kn_zero_flat(N, S))
            out.append(kn_one_flat(N, S))
            if r >= 2:
                out.append(kn_diag_flat(N, S))
    return sort_flats(out)


def kn_infinity_flats(N: int) -> list[EdgeFlat]:
    """One flat {z_j = 0 : j in J} per nonempty J: 2^N - 1 flats."""
    if N < 1:
        raise MalformedInputError("N must be >= 1")
    out = [EdgeFlat(N, None, frozenset(), frozenset(J))
           for r in range(1, N + 1) for J in combinations(range(1, N + 1), r)]
    return sort_flats(out)


def kn_flats(N: int) -> list[EdgeFlat]:
    """Affine and at-infinity flats of the compactified arrangement, canonically sorted."""
    return sort_flats(kn_dense_affine(N) + kn_infinity_flats(N))


__all__ = [
    "Arrangement", "EdgeFlat", "Hyperplane", "SVariable", "dense_edges", "edges",
    "edges_by_subsets", "is_dense", "kn_arrangement", "kn_dense_affine",
    "kn_diag_flat", "kn_flats", "kn_infinity_flats", "kn_one_flat",
    "kn_variables", "kn_zero_flat", "matroid_components", "sort_flats",
]
