"""Exact rational vectors, affine forms and row reduction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from ..errors import DimensionMismatchError

Vector = tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def vector(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def _check_rows(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    width = len(rows[0])
    for r in rows:
        if len(r) != width:
            raise DimensionMismatchError(
                f"ragged rows: lengths {width} and {len(r)}")
    return width


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        fr = [to_fraction(v) for v in r]
        m = lcm(*(v.denominator for v in fr)) if fr else 1
        out.append([int(v * m) for v in fr])
    return out


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a list of rational rows via fraction-free (Bareiss) elimination."""
    width = _check_rows(rows)
    if width == 0:
        return 0
    m = _integer_rows(rows)
    r = 0
    prev = 1
    for col in range(width):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            for j in range(col + 1, width):
                m[i][j] = (m[r][col] * m[i][j] - m[i][col] * m[r][j]) // prev
            m[i][col] = 0
        prev = m[r][col]
        r += 1
        if r == len(m):
            break
    return r


def rref(rows: Sequence[Sequence]) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form (zero rows dropped) and pivot columns."""
    width = _check_rows(rows)
    m = [list(vector(r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(width):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        m[r] = [v / p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def solve_combination(basis: Sequence[Vector], target: Vector) -> list[Fraction] | None:
    """Coefficients c with sum(c_i basis_i) == target, or None.

    ``basis`` must be linearly independent.
    """
    k = len(basis)
    if k == 0:
        return [] if all(v == 0 for v in target) else None
    # columns are basis vectors; augment with target
    n = len(target)
    aug = [[basis[i][row] for i in range(k)] + [target[row]] for row in range(n)]
    red, piv = rref(aug)
    if k in piv:
        return None
    coeffs = [Fraction(0)] * k
    for row, col in zip(red, piv):
        coeffs[col] = row[k]
    return coeffs


@dataclass(frozen=True)
class AffineForm:
    """The affine function x -> coeffs . x + constant."""

    coeffs: Vector
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", vector(self.coeffs))
        object.__setattr__(self, "constant", to_fraction(self.constant))

    @classmethod
    def coordinate(cls, n: int, i: int, scale=1, constant=0) -> "AffineForm":
        """scale * x_i + constant in R^n (0-based i)."""
        c = [0] * n
        c[i] = scale
        return cls(c, constant)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def is_constant(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __call__(self, x: Sequence) -> Fraction:
        if len(x) != self.dim:
            raise DimensionMismatchError(
                f"point of length {len(x)} for form on R^{self.dim}")
        return sum((a * to_fraction(v) for a, v in zip(self.coeffs, x)),
                   self.constant)

    def __neg__(self) -> "AffineForm":
        return AffineForm(tuple(-c for c in self.coeffs), -self.constant)

    def __add__(self, other: "AffineForm") -> "AffineForm":
        if other.dim != self.dim:
            raise DimensionMismatchError("adding forms of different dimension")
        return AffineForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                          self.constant + other.constant)

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return self + (-other)

    def scaled(self, factor) -> "AffineForm":
        f = to_fraction(factor)
        return AffineForm(tuple(f * c for c in self.coeffs), f * self.constant)

    def augmented(self) -> Vector:
        """Row (coeffs | constant) used for canonical comparisons."""
        return self.coeffs + (self.constant,)

    def normalized(self) -> "AffineForm":
        """Scale so the first nonzero entry of the augmented row is +-1,
        keeping the sign (so the half-space form >= 0 is unchanged)."""
        for v in self.augmented():
            if v != 0:
                return self.scaled(1 / abs(v))
        return self

    def projective_key(self) -> Vector:
        """Identical for forms that agree up to a nonzero scalar."""
        for v in self.augmented():
            if v != 0:
                return self.scaled(1 / v).augmented()
        return self.augmented()

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs, start=1):
            if c == 0:
                continue
            mag = abs(c)
            body = f"x{i}" if mag == 1 else f"{mag}*x{i}"
            terms.append(("- " if c < 0 else "+ ") + body)
        if self.constant != 0 or not terms:
            terms.append(("- " if self.constant < 0 else "+ ") + str(abs(self.constant)))
        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]
