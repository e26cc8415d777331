"""Exact integer and rational linear algebra.

Everything here works on plain Python ints and :class:`fractions.Fraction`
values so that lattice indices, determinants and kernels are exact.
Matrices are sequences of rows.
"""

from __future__ import annotations

import functools
import itertools
import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import RankError


@functools.total_ordering
class _Infinity:
    """Positive infinity that orders above every rational number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("troptangent-infinity")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("inf - inf is undefined")
        return self

    def __neg__(self):
        raise ArithmeticError("negative infinity is not representable")

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_inf(value) -> bool:
    return value is INF


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions and strings like ``"3/8"`` to a Fraction.

    Floats are refused because the whole pipeline is exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vscale(c, u):
    return tuple(c * a for a in u)


def _bareiss(rows: list[list[int]]) -> int:
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det(matrix: Sequence[Sequence]) -> Fraction | int:
    """Exact determinant of a square matrix.

    Integer input goes through fraction-free Bareiss elimination and
    returns an int; anything else is eliminated over the rationals.
    """
    n = len(matrix)
    if n == 0:
        return 1
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    if all(isinstance(x, int) for row in matrix for x in row):
        return _bareiss([list(r) for r in matrix])
    m = [[Fraction(x) for x in row] for row in matrix]
    result = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if m[i][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            result = -result
        result *= m[k][k]
        for i in range(k + 1, n):
            factor = m[i][k] / m[k][k]
            if factor:
                for j in range(k, n):
                    m[i][j] -= factor * m[k][j]
    return result


def minor_delta(rows: Sequence[Sequence[int]], removed: Iterable[int]) -> int:
    """Determinant of the matrix obtained by deleting the given columns.

    ``rows`` has k rows of length k + len(removed).
    """
    removed = set(removed)
    width = len(rows[0]) if rows else len(removed)
    keep = [j for j in range(width) if j not in removed]
    if len(keep) != len(rows):
        raise ValueError(
            f"{len(rows)} rows but {len(keep)} columns remain after deletion")
    return det([[row[j] for j in keep] for row in rows])


def maximal_minors(rows: Sequence[Sequence]) -> list:
    k = len(rows)
    width = len(rows[0])
    return [det([[row[j] for j in cols] for row in rows])
            for cols in itertools.combinations(range(width), k)]


def lattice_index(rows: Sequence[Sequence[int]]) -> int:
    """Index of the lattice generated by ``rows`` in its saturation.

    This is the gcd of the maximal minors.  Linearly dependent rows have
    no finite index and raise :class:`RankError`.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    if not rows:
        return 1
    g = 0
    for minor in maximal_minors(rows):
        g = math.gcd(g, minor)
    if g == 0:
        raise RankError("generators are linearly dependent")
    return g


def theta(a_rows, b_rows, first, second) -> int:
    """Cross determinant comparing two matrices on two column sets.

    Zero exactly when the minor ratio of ``a_rows`` across the two
    column deletions equals the one of ``b_rows``.
    """
    return (minor_delta(a_rows, first) * minor_delta(b_rows, second)
            - minor_delta(a_rows, second) * minor_delta(b_rows, first))


def primitive(vector: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector
    pointing the same way."""
    fr = [Fraction(x) for x in vector]
    if not any(fr):
        raise ValueError("zero vector has no primitive representative")
    lcm = 1
    for x in fr:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints)


def clear_denominators(vector: Sequence) -> tuple[int, ...]:
    """Integer vector on the same ray, or the zero vector."""
    if not any(vector):
        return tuple(0 for _ in vector)
    return primitive(vector)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q with the list of pivot columns."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    width = len(m[0])
    pivots = []
    r = 0
    for c in range(width):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    rows = [r for r in rows]
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], width: int | None = None) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel {x : rows x = 0} over Q."""
    if not rows:
        if width is None:
            raise ValueError("width required for an empty matrix")
        return [tuple(Fraction(int(i == j)) for j in range(width)) for i in range(width)]
    width = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * width
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve_affine(rows: Sequence[Sequence], rhs: Sequence, width: int):
    """Parametrize {x : rows x = rhs}.

    Returns ``(x0, basis)`` with every solution equal to x0 plus a
    combination of ``basis``, or ``None`` when the system is inconsistent.
    """
    if not rows:
        return (tuple(Fraction(0) for _ in range(width)),
                nullspace([], width))
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if pivots and pivots[-1] == width:
        return None
    x0 = [Fraction(0)] * width
    for row, p in zip(red, pivots):
        x0[p] = row[width]
    coefficient_rows = [r[:width] for r in red]
    if not coefficient_rows:
        return tuple(x0), nullspace([], width)
    return tuple(x0), nullspace(coefficient_rows)


def span_contains(rows: Sequence[Sequence], vector: Sequence) -> bool:
    if not any(vector):
        return True
    return rank(list(rows) + [vector]) == rank(rows)


def integer_solve_unimodular(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Z-basis of the integer kernel of an integer matrix.

    Column operations bring the matrix to echelon form while the same
    operations on an identity matrix record a unimodular transform; its
    trailing columns span the kernel lattice.
    """
    m = [list(map(int, r)) for r in rows]
    if not m:
        raise ValueError("empty matrix")
    width = len(m[0])
    u = [[int(i == j) for j in range(width)] for i in range(width)]

    def colop_swap(a, b):
        for row in m:
            row[a], row[b] = row[b], row[a]
        for row in u:
            row[a], row[b] = row[b], row[a]

    def colop_add(target, source, factor):
        for row in m:
            row[target] += factor * row[source]
        for row in u:
            row[target] += factor * row[source]

    col = 0
    for r in range(len(m)):
        if col == width:
            break
        while True:
            nonzero = [c for c in range(col, width) if m[r][c] != 0]
            if not nonzero:
                break
            best = min(nonzero, key=lambda c: abs(m[r][c]))
            if best != col:
                colop_swap(best, col)
            done = True
            for c in range(col + 1, width):
                if m[r][c]:
                    colop_add(c, col, -(m[r][c] // m[r][col]))
                    if m[r][c]:
                        done = False
            if done:
                break
        if any(m[r][c] for c in range(col, width)):
            col += 1
    return [tuple(u[i][c] for i in range(width)) for c in range(col, width)]


def saturation_basis(rows: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Z-basis of span(rows) intersected with the integer lattice."""
    rows = [clear_denominators(r) for r in rows if any(r)]
    if not rows:
        return []
    width = len(rows[0])
    annihilator = integer_solve_unimodular(rows)
    if not annihilator:
        return [tuple(int(i == j) for j in range(width)) for i in range(width)]
    return integer_solve_unimodular(annihilator)


def independent_subset(vectors: Sequence[Sequence]) -> list:
    """Greedy maximal linearly independent subfamily, order preserved."""
    chosen = []
    for v in vectors:
        if any(v) and rank(chosen + [list(v)]) > len(chosen):
            chosen.append(list(v))
    return [tuple(v) for v in chosen]
