"""Convergence conditions, polar-locus contribution and independence witnesses.

A flat of the resolved arrangement contributes its leading candidate pole
to the zeta function over D exactly when its trace on D is as large as the
flat itself. For flats at infinity the trace is read off the recession cone
of D.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import ratpoly
from .arrangement import (
    DIAG,
    Arrangement,
    EdgeFlat,
    SVariable,
    dense_edges,
    kn_dense_affine,
    kn_flats,
    kn_variables,
)
from .errors import DomainDegenerateError, MalformedInputError, UnsupportedDomainError
from .ratpoly import AffineForm, Polyhedron
from .ratpoly.polyhedron import sign_patterns

GREATER, LESS = "greater", "less"

ATOM_TYPES = ("ge0", "le0", "ge1", "le1", "ge")


# -- integration domains ---------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    """One KN boundary condition: x_i >= 0, x_i <= 0, x_i >= 1, x_i <= 1 or x_i >= x_j."""

    type: str
    i: int
    j: int | None = None

    def __post_init__(self):
        if self.type not in ATOM_TYPES:
            raise MalformedInputError(f"unknown atom type {self.type!r}")
        if (self.type == "ge") != (self.j is not None):
            raise MalformedInputError("atom 'ge' needs both i and j, the others only i")
        if self.type == "ge" and self.i == self.j:
            raise MalformedInputError("atom 'ge' needs i != j")

    def form(self, N: int) -> AffineForm:
        """The affine form that is >= 0 on the half-space."""
        for k in (self.i, self.j):
            if k is not None and not 1 <= k <= N:
                raise MalformedInputError(f"atom index {k} outside 1..{N}")
        i = self.i - 1
        if self.type == "ge0":
            return AffineForm.coordinate(N, i)
        if self.type == "le0":
            return AffineForm.coordinate(N, i, scale=-1)
        if self.type == "ge1":
            return AffineForm.coordinate(N, i, constant=-1)
        if self.type == "le1":
            return AffineForm.coordinate(N, i, scale=-1, constant=1)
        c = [0] * N
        c[i], c[self.j - 1] = 1, -1
        return AffineForm(c, 0)

    def __str__(self) -> str:
        if self.type == "ge":
            return f"x{self.i} >= x{self.j}"
        op = ">=" if self.type.startswith("ge") else "<="
        return f"x{self.i} {op} {self.type[-1]}"


@dataclass(frozen=True)
class Domain:
    """A full-dimensional integration polyhedron D in R^N.

    KN domains keep their atoms; general domains are arbitrary rational
    inequalities and only support the affine analysis when unbounded.
    """

    N: int
    polyhedron: Polyhedron
    atoms: tuple[Atom, ...] | None = None
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.polyhedron.ambient_dim != self.N:
            raise MalformedInputError("domain polyhedron has the wrong ambient dimension")
        d = ratpoly.dim(self.polyhedron)
        if d != self.N:
            raise DomainDegenerateError(f"domain has dimension {d}, expected {self.N}")

    @classmethod
    def from_atoms(cls, N: int, atoms: Iterable[Atom], name: str | None = None) -> "Domain":
        atoms = tuple(atoms)
        poly = Polyhedron(N, [a.form(N) for a in atoms])
        return cls(N, poly, atoms, name)

    @classmethod
    def general(cls, N: int, inequalities: Iterable[AffineForm], name: str | None = None) -> "Domain":
        return cls(N, Polyhedron(N, tuple(inequalities)), None, name)

    @classmethod
    def whole(cls, N: int) -> "Domain":
        return cls.from_atoms(N, (), f"R^{N}")

    @classmethod
    def simplex(cls, N: int) -> "Domain":
        """0 <= x_1 <= x_2 <= ... <= x_N <= 1."""
        atoms = [Atom("ge0", 1)] + [Atom("ge", i + 1, i) for i in range(1, N)] + [Atom("le1", N)]
        return cls.from_atoms(N, atoms, f"Delta_{N}")

    @classmethod
    def cube(cls, N: int) -> "Domain":
        atoms = [a for i in range(1, N + 1) for a in (Atom("ge0", i), Atom("le1", i))]
        return cls.from_atoms(N, atoms, f"Box_{N}")

    @property
    def is_kn(self) -> bool:
        return self.atoms is not None

    @property
    def ident(self) -> str:
        if self.name:
            return self.name
        if self.atoms is not None:
            return "{" + ", ".join(str(a) for a in self.atoms) + "}" if self.atoms else f"R^{self.N}"
        return f"general({len(self.polyhedron.inequalities)})"

    @cached_property
    def bounded(self) -> bool:
        return ratpoly.is_bounded(self.polyhedron)


# -- convergence conditions ------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceCondition:
    """sum(Re s_v for v in support) > bound (sense 'greater') or < bound ('less')."""

    support: frozenset
    bound: int
    sense: str = GREATER
    source: EdgeFlat | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))
        if not self.support:
            raise MalformedInputError("a condition needs a nonempty support")
        if self.bound >= 0:
            raise MalformedInputError("condition bounds are negative integers")
        if self.sense not in (GREATER, LESS):
            raise MalformedInputError(f"unknown sense {self.sense!r}")

    @property
    def at_infinity(self) -> bool:
        return self.sense == LESS

    def sorted_support(self) -> list[SVariable]:
        return sorted(self.support)

    def value(self, assignment: Mapping):
        return sum(assignment[v] for v in self.sorted_support())

    def holds(self, assignment: Mapping) -> bool:
        """Strict inequality at the given real parts."""
        v = self.value(assignment)
        return v > self.bound if self.sense == GREATER else v < self.bound

    def violated(self, assignment: Mapping) -> bool:
        """Not strictly satisfied; landing on the boundary counts as violated."""
        return not self.holds(assignment)

    def __str__(self) -> str:
        lhs = " + ".join(f"Re({v})" for v in self.sorted_support())
        op = ">" if self.sense == GREATER else "<"
        return f"{lhs} {op} {self.bound}"


def affine_condition(edge: EdgeFlat, N: int) -> ConvergenceCondition:
    """sum over hyperplanes containing the edge > -(N - dim)."""
    return ConvergenceCondition(edge.containing, -(N - edge.dim), GREATER, edge)


def infinity_support(N: int, J: Iterable[int]) -> frozenset:
    J = set(J)
    out = {SVariable.zero(j) for j in J} | {SVariable.one(j, N) for j in J}
    out |= {SVariable.diag(i, j) for i, j in combinations(range(1, N + 1), 2) if i in J or j in J}
    return frozenset(out)


def condition_for(edge: EdgeFlat, N: int) -> ConvergenceCondition:
    if edge.is_affine:
        return affine_condition(edge, N)
    return ConvergenceCondition(infinity_support(N, edge.infinity), -len(edge.infinity), LESS, edge)


def kn_conditions(N: int) -> list[ConvergenceCondition]:
    """The 2^(N+2) - N - 4 conditions, one per affine or at-infinity flat."""
    return [condition_for(e, N) for e in kn_flats(N)]


def general_conditions(A: Arrangement) -> list[ConvergenceCondition]:
    if A.kind != "general":
        raise MalformedInputError("use kn_conditions for the KN arrangement")
    return [affine_condition(e, A.ambient_dim) for e in dense_edges(A)]


# -- contribution test ------------------------------------------------------------

@dataclass(frozen=True)
class Contribution:
    contributes: bool
    intersection_dim: int
    flat_dim: int
    sign_pattern: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.contributes


def _complement(N: int, J: Iterable[int]) -> list[int]:
    J = set(J)
    return [k - 1 for k in range(1, N + 1) if k not in J]


def _escape_pattern(P: Polyhedron, J: Sequence[int]) -> tuple[int, ...] | None:
    """Sign pattern sigma on J (1-based) admitting a recession direction, if any."""
    idx = [j - 1 for j in sorted(J)]
    for sigma in sign_patterns(len(idx)):
        if ratpoly.recession_direction_exists(P, idx, sigma):
            return sigma
    return None


def _infinity_trace(D: Domain, J: frozenset) -> Contribution:
    N = D.N
    flat_dim = N - len(J)
    if D.bounded:
        return Contribution(False, -1, flat_dim)
    if not D.is_kn:
        raise UnsupportedDomainError(
            "at-infinity analysis needs a KN-atom domain or a bounded one")
    P = D.polyhedron
    sigma = _escape_pattern(P, J)
    if sigma is not None:
        d = ratpoly.projection_dim(P, _complement(N, J))
        return Contribution(d == flat_dim, d, flat_dim, sigma)
    # the trace, if any, lives where further coordinates escape as well
    best = -1
    rest = [k for k in range(1, N + 1) if k not in J]
    for r in range(1, len(rest) + 1):
        for extra in combinations(rest, r):
            JJ = J | set(extra)
            if _escape_pattern(P, JJ) is not None:
                best = max(best, ratpoly.projection_dim(P, _complement(N, JJ)))
    return Contribution(False, best, flat_dim)


def contributes(flat: EdgeFlat, D: Domain) -> Contribution:
    if flat.ambient_dim != D.N:
        raise MalformedInputError("flat and domain live in different dimensions")
    if flat.is_affine:
        d = ratpoly.dim_intersection(flat.flat, D.polyhedron)
        return Contribution(d == flat.dim, d, flat.dim)
    return _infinity_trace(D, flat.infinity)


# -- polar reports ------------------------------------------------------------------

@dataclass(frozen=True)
class GammaFactor:
    """Gamma(sum(support) + shift) for sign 'plus', Gamma(-sum(support) - shift) for 'minus'."""

    sign: str
    support: frozenset
    shift: int

    def __str__(self) -> str:
        names = [str(v) for v in sorted(self.support)]
        if self.sign == "plus":
            return "Γ(" + "+".join(names) + f"+{self.shift})"
        return "Γ(" + "".join(f"-{n}" for n in names) + f"-{self.shift})"


@dataclass(frozen=True)
class PoleFamily:
    """Candidate poles {sum(support) = bound + step * t : t = 0, 1, 2, ...}."""

    condition: ConvergenceCondition
    step: int

    @property
    def leading(self) -> tuple[frozenset, int]:
        return self.condition.support, self.condition.bound

    def member(self, t: int) -> int:
        return self.condition.bound + self.step * t


@dataclass(frozen=True)
class FlatRecord:
    flat: EdgeFlat
    condition: ConvergenceCondition
    intersection_dim: int
    flat_dim: int
    contributes: bool


@dataclass(frozen=True)
class PolarReport:
    arrangement: str
    domain: str
    N: int
    records: tuple[FlatRecord, ...]
    variant: str = "plain"

    @property
    def contributing(self) -> list[FlatRecord]:
        return [r for r in self.records if r.contributes]

    def region(self) -> list[ConvergenceCondition]:
        """Conditions cutting out the convergence region over this domain."""
        return [r.condition for r in self.contributing]

    @property
    def pole_families(self) -> list[PoleFamily]:
        return [PoleFamily(r.condition, 1 if r.condition.at_infinity else -1)
                for r in self.contributing]

    @property
    def gamma_factors(self) -> list[GammaFactor]:
        return [GammaFactor("minus" if r.condition.at_infinity else "plus",
                            r.condition.support, -r.condition.bound)
                for r in self.contributing]


def _record(flat: EdgeFlat, cond: ConvergenceCondition, D: Domain) -> FlatRecord:
    c = contributes(flat, D)
    return FlatRecord(flat, cond, c.intersection_dim, c.flat_dim, c.contributes)


def polar_report(N: int, D: Domain) -> PolarReport:
    if D.N != N:
        raise MalformedInputError(f"domain is in R^{D.N}, not R^{N}")
    recs = tuple(_record(e, condition_for(e, N), D) for e in kn_flats(N))
    return PolarReport(f"kn({N})", D.ident, N, recs)


def general_polar_report(A: Arrangement, D: Domain) -> PolarReport:
    """Affine dense-edge analysis for a general arrangement over a bounded domain."""
    if D.N != A.ambient_dim:
        raise MalformedInputError("domain and arrangement dimensions differ")
    if not D.bounded:
        raise UnsupportedDomainError(
            "general arrangements are analysed over bounded domains only")
    recs = tuple(_record(e, affine_condition(e, D.N), D) for e in dense_edges(A))
    return PolarReport(A.ident, D.ident, D.N, recs)


def is_pure_diagonal(flat: EdgeFlat) -> bool:
    return flat.is_affine and all(v.kind == DIAG for v in flat.containing)


def i0_filter(report: PolarReport) -> PolarReport:
    """Drop flats cut out by diagonals only: with |x_i - x_j + i0|^s these
    factors are entire in s and give no candidate pole."""
    if not report.arrangement.startswith("kn("):
        raise MalformedInputError("the i0 variant applies to the KN arrangement")
    recs = tuple(r for r in report.records if not is_pure_diagonal(r.flat))
    return PolarReport(report.arrangement, report.domain, report.N, recs, "i0")


# -- independence witnesses ------------------------------------------------------------

@dataclass(frozen=True)
class WitnessPoint:
    assignment: Mapping

    def __getitem__(self, v: SVariable) -> Fraction:
        return self.assignment[v]

    def items(self):
        return sorted(self.assignment.items())


def _lookup(N: int, target: ConvergenceCondition) -> ConvergenceCondition:
    for c in kn_conditions(N):
        if c == target:
            return c
    raise MalformedInputError(f"{target} is not a convergence condition for N={N}")


def independence_witness(N: int, target: ConvergenceCondition) -> WitnessPoint:
    """A rational point on the boundary of ``target`` satisfying every other
    KN condition strictly."""
    target = _lookup(N, target)
    vars_ = kn_variables(N)
    size = Fraction(len(target.support))
    if not target.at_infinity:
        k = N + target.bound
        inside = Fraction(-2, N + 1 - k)
        outside = Fraction(-2, N + 2) * Fraction((k + 1) * N + 2 * k,
                                                 2 * (k + 1) * N - k * (k - 1))
    else:
        d = N + target.bound
        if d == 0:
            return WitnessPoint({v: Fraction(-2, N + 3) for v in vars_})
        inside = Fraction(-2, N + d + 3)
        outside = Fraction(-2, N + 2) * Fraction((d + 1) * N + 2 * d, d * (d + 3))
    assert size * inside == target.bound
    return WitnessPoint({v: inside if v in target.support else outside for v in vars_})


def verify_witness(w: WitnessPoint | Mapping, conditions: Sequence[ConvergenceCondition],
                   target: ConvergenceCondition) -> bool:
    a = w.assignment if isinstance(w, WitnessPoint) else w
    if not target.violated(a):
        return False
    return all(c.holds(a) for c in conditions if c != target)


def hypercube_point(N: int) -> WitnessPoint:
    """Midpoint of the hypercube -2/(N+1) < Re s < -2/(N+3) inside the KN region."""
    mid = -(Fraction(1, N + 1) + Fraction(1, N + 3))
    return WitnessPoint({v: mid for v in kn_variables(N)})


def span_is_centre(flat: EdgeFlat, D: Domain) -> bool:
    """Whether the affine span of a lower-dimensional trace is a KN dense edge."""
    if not flat.is_affine:
        raise MalformedInputError("span_is_centre expects an affine flat")
    trace = D.polyhedron.with_equalities(flat.flat.equations)
    d = ratpoly.dim(trace)
    if d < 0 or d >= flat.dim:
        raise ValueError("needs a nonempty trace of smaller dimension than the flat")
    hull = ratpoly.affine_hull(trace)
    return hull in {e.flat for e in kn_dense_affine(D.N)}


__all__ = [
    "Atom", "Contribution", "ConvergenceCondition", "Domain", "FlatRecord",
    "GammaFactor", "PolarReport", "PoleFamily", "WitnessPoint", "condition_for",
    "contributes", "general_conditions", "general_polar_report", "hypercube_point",
    "i0_filter", "independence_witness", "infinity_support", "kn_conditions",
    "polar_report", "span_is_centre", "verify_witness",
]
