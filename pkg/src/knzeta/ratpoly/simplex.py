"""Two-phase primal simplex over the rationals with Bland's rule.

Problems are posed over free variables x in R^n::

    maximize   objective(x)
    subject to f(x) >= 0  for f in inequalities
               g(x) == 0  for g in equalities

Free variables are split as x = p - q and every inequality gets a slack.
Bland's smallest-index rule is used for both the entering and the leaving
variable, so the method terminates on degenerate problems.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import AffineForm, Vector

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

_ZERO = Fraction(0)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    point: Vector | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], basis: list[int], ncols: int):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols
        self.obj: list[Fraction] = []

    def set_objective(self, cost: list[Fraction]):
        obj = list(cost) + [_ZERO]
        for row, b in zip(self.rows, self.basis):
            cb = cost[b]
            if cb != 0:
                obj = [o - cb * v for o, v in zip(obj, row)]
        self.obj = obj

    @property
    def value(self) -> Fraction:
        return -self.obj[-1]

    def pivot(self, i: int, j: int):
        row = self.rows[i]
        p = row[j]
        row = [v / p for v in row]
        self.rows[i] = row
        for k, other in enumerate(self.rows):
            if k != i and other[j] != 0:
                f = other[j]
                self.rows[k] = [a - f * b for a, b in zip(other, row)]
        f = self.obj[j]
        if f != 0:
            self.obj = [a - f * b for a, b in zip(self.obj, row)]
        self.basis[i] = j

    def run(self, allowed: int) -> str:
        """Maximize; columns >= ``allowed`` never enter the basis."""
        while True:
            j = next((c for c in range(allowed) if self.obj[c] > 0), None)
            if j is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                if row[j] > 0:
                    key = (row[-1] / row[j], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], j)

    def primal(self) -> list[Fraction]:
        z = [_ZERO] * self.ncols
        for row, b in zip(self.rows, self.basis):
            z[b] = row[-1]
        return z


def _standard_form(n: int, inequalities: Sequence[AffineForm],
                   equalities: Sequence[AffineForm]):
    m_ub = len(inequalities)
    ncols = 2 * n + m_ub
    rows = []
    for k, f in enumerate(inequalities):
        # f(x) >= 0  <=>  -a.p + a.q + slack = c
        row = [-a for a in f.coeffs] + list(f.coeffs) + [_ZERO] * m_ub
        row[2 * n + k] = Fraction(1)
        rows.append(row + [f.constant])
    for g in equalities:
        row = list(g.coeffs) + [-a for a in g.coeffs] + [_ZERO] * m_ub
        rows.append(row + [-g.constant])
    for r in rows:
        if r[-1] < 0:
            r[:] = [-v for v in r]
    return rows, ncols


def _phase_one(n: int, inequalities, equalities) -> _Tableau | None:
    rows, ncols = _standard_form(n, inequalities, equalities)
    m = len(rows)
    full = []
    for i, r in enumerate(rows):
        art = [_ZERO] * m
        art[i] = Fraction(1)
        full.append(r[:-1] + art + [r[-1]])
    tab = _Tableau(full, [ncols + i for i in range(m)], ncols + m)
    tab.set_objective([_ZERO] * ncols + [Fraction(-1)] * m)
    tab.run(allowed=ncols)
    if tab.value < 0:
        return None
    # drive zero-level artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= ncols:
            j = next((c for c in range(ncols) if tab.rows[i][c] != 0), None)
            if j is None:
                del tab.rows[i]
                del tab.basis[i]
                continue
            tab.pivot(i, j)
        i += 1
    tab.rows = [r[:ncols] + [r[-1]] for r in tab.rows]
    tab.ncols = ncols
    return tab


def feasible_point(n: int, inequalities: Sequence[AffineForm],
                   equalities: Sequence[AffineForm] = ()) -> Vector | None:
    tab = _phase_one(n, inequalities, equalities)
    if tab is None:
        return None
    z = tab.primal()
    return tuple(z[i] - z[n + i] for i in range(n))


def maximize(objective: AffineForm, inequalities: Sequence[AffineForm],
             equalities: Sequence[AffineForm] = ()) -> LPResult:
    n = objective.dim
    tab = _phase_one(n, inequalities, equalities)
    if tab is None:
        return LPResult(INFEASIBLE)
    a = list(objective.coeffs)
    cost = a + [-v for v in a] + [_ZERO] * (tab.ncols - 2 * n)
    tab.set_objective(cost)
    status = tab.run(allowed=tab.ncols)
    z = tab.primal()
    point = tuple(z[i] - z[n + i] for i in range(n))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, point)
    return LPResult(OPTIMAL, tab.value + objective.constant, point)
