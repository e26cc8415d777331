"""Tropical complete intersection curves.

The curve cut out by n - 1 valued supports in the n-dimensional torus
is computed cell by cell: every choice of minimal sets, one per support,
whose open region is nonempty gives a vertex or an open edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import AssumptionError, InputError
from .hypersurface import ValuedSupport, hypersurface_cells, pair_exponent
from .lattice import INF, is_inf, lattice_index, nullspace, primitive, rank, vsub
from .polyhedra import open_cell_nonempty


@dataclass(frozen=True)
class CurveVertex:
    point: tuple[Fraction, ...]
    minimal: tuple[tuple[tuple[int, ...], ...], ...]


@dataclass(frozen=True)
class CurveEdge:
    """Open edge ``base + s * direction`` for 0 < s < length."""

    base: tuple[Fraction, ...]
    direction: tuple[int, ...]
    length: object  # Fraction or INF
    minimal: tuple[tuple[tuple[int, ...], ...], ...]
    multiplicity: int
    start: int
    end: int | None

    def point_at(self, s) -> tuple[Fraction, ...]:
        return tuple(b + s * d for b, d in zip(self.base, self.direction))

    @property
    def bounded(self) -> bool:
        return not is_inf(self.length)


@dataclass
class TropicalCurve:
    supports: tuple[ValuedSupport, ...]
    vertices: list[CurveVertex]
    edges: list[CurveEdge]

    @property
    def n(self) -> int:
        return self.supports[0].n

    def cell(self, label: str):
        kind, idx = label[0], int(label[1:])
        return self.vertices[idx] if kind == "V" else self.edges[idx]

    def label(self, cell) -> str:
        if isinstance(cell, CurveVertex):
            return f"V{self.vertices.index(cell)}"
        return f"E{self.edges.index(cell)}"

    def vertex_index(self, point) -> int:
        for k, v in enumerate(self.vertices):
            if v.point == tuple(point):
                return k
        raise KeyError(point)

    def edges_at(self, vertex_index: int) -> list[CurveEdge]:
        return [e for e in self.edges if vertex_index in (e.start, e.end)]

    def outgoing_direction(self, edge: CurveEdge, vertex_index: int) -> tuple[int, ...]:
        if edge.start == vertex_index:
            return edge.direction
        return tuple(-x for x in edge.direction)

    def to_json(self) -> dict:
        return {
            "vertices": [{"label": f"V{k}", "point": [str(x) for x in v.point]}
                         for k, v in enumerate(self.vertices)],
            "edges": [{
                "label": f"E{k}",
                "base": [str(x) for x in e.base],
                "direction": list(e.direction),
                "length": str(e.length),
                "multiplicity": e.multiplicity,
                "start": f"V{e.start}",
                "end": None if e.end is None else f"V{e.end}",
            } for k, e in enumerate(self.edges)],
        }


def _cells_of_tuple(supports, choice, n):
    eqs, strict = [], []
    from .hypersurface import region_constraints
    for s, cell in zip(supports, choice):
        e, st = region_constraints(s, cell.minimal)
        eqs += e
        strict += st
    return open_cell_nonempty(n, eqs, [], strict)


def intersect_curve(supports: Sequence[ValuedSupport]) -> TropicalCurve:
    """Compute the tropical curve of a tropical complete intersection.

    Raises :class:`AssumptionError` when the hypersurfaces do not meet
    transversally or a cell of the curve breaks the three-term rule.
    """
    supports = tuple(supports)
    if not supports:
        raise InputError("no hypersurfaces given")
    n = supports[0].n
    if any(s.n != n for s in supports):
        raise InputError("supports live in different tori")
    if len(supports) != n - 1:
        raise InputError(f"a curve in dimension {n} needs {n - 1} hypersurfaces, got {len(supports)}")
    cell_lists = [hypersurface_cells(s) for s in supports]
    vertices: list[CurveVertex] = []
    open_edges = []
    for choice in itertools.product(*cell_lists):
        total = sum(c.codim for c in choice)
        if total > n + 1:
            continue
        poly = _cells_of_tuple(supports, choice, n)
        if poly is None:
            continue
        minimal = tuple(c.minimal for c in choice)
        if poly.dim != n - total:
            raise AssumptionError(
                "hypersurfaces are not a tropical complete intersection: "
                f"cell of dimension {poly.dim} where {n - total} was expected",
                cell=[str(x) for x in poly.interior_point()])
        for c in choice:
            if c.codim <= 2 and len(c.minimal) != c.codim + 1:
                raise AssumptionError(
                    "three-term condition fails: a cell of codimension "
                    f"{c.codim} has {len(c.minimal)} lowest order terms",
                    cell=[str(x) for x in poly.interior_point()])
        if poly.dim == 0:
            vertices.append(CurveVertex(poly.points[0], minimal))
        elif poly.dim == 1:
            open_edges.append((poly, minimal))
    if not vertices:
        raise AssumptionError("the tropical curve has no vertex")
    vertices.sort(key=lambda v: v.point)
    index = {v.point: k for k, v in enumerate(vertices)}
    edges = []
    for poly, minimal in open_edges:
        if poly.lines:
            raise AssumptionError("the tropical curve contains a full line")
        rows = [vsub(m[1], m[0]) for m in minimal]
        mult = lattice_index(rows)
        if poly.rays:
            base = poly.points[0]
            direction = primitive(poly.rays[0])
            edges.append(CurveEdge(base, direction, INF, minimal, mult, index[base], None))
        else:
            a, b = sorted(poly.points)
            diff = vsub(b, a)
            direction = primitive(diff)
            length = next(d / p for d, p in zip(diff, direction) if p)
            edges.append(CurveEdge(a, direction, length, minimal, mult, index[a], index[b]))
    edges.sort(key=lambda e: (e.start, e.end is None, e.end or 0, e.direction))
    return TropicalCurve(supports, vertices, edges)


def homogeneous(direction: Sequence) -> tuple:
    return (0,) + tuple(direction)


def degree(curve: TropicalCurve) -> int:
    """Degree read off from the weighted unbounded rays."""
    n = curve.n
    totals = [0] * (n + 1)
    for e in curve.edges:
        if e.bounded:
            continue
        u = homogeneous(e.direction)
        low = min(u)
        for i in range(n + 1):
            totals[i] += e.multiplicity * (u[i] - low)
    if len(set(totals)) != 1:
        raise AssumptionError(f"rays are not balanced at infinity: {totals}")
    return totals[0]


def check_balancing(curve: TropicalCurve) -> bool:
    for k in range(len(curve.vertices)):
        total = [0] * curve.n
        for e in curve.edges_at(k):
            d = curve.outgoing_direction(e, k)
            total = [t + e.multiplicity * x for t, x in zip(total, d)]
        if any(total):
            return False
    return True


def affine_span_dimension(curve: TropicalCurve) -> int:
    dirs = [v.point for v in curve.vertices]
    base = dirs[0]
    vecs = [vsub(p, base) for p in dirs[1:]] + [e.direction for e in curve.edges]
    return rank(vecs)


def edge_multiplicity(rows: Sequence[Sequence[int]]) -> int:
    return lattice_index(rows)


@dataclass(frozen=True)
class CellContext:
    """Local data of a curve cell after normalizing each support so that
    a chosen minimal term becomes the constant 1.

    ``supports`` are the shifted supports, ``rows`` the nonconstant
    minimal exponents (one per support).  At a vertex the support with
    three minimal terms is ``special`` (0-based) and ``alt_row`` is its
    second nonconstant minimal exponent.
    """

    kind: str
    label: str
    point: tuple[Fraction, ...]
    direction: tuple[int, ...] | None
    length: object
    supports: tuple[ValuedSupport, ...]
    rows: tuple[tuple[int, ...], ...]
    special: int | None
    alt_row: tuple[int, ...] | None
    multiplicity: int | None
    pivots: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rows[0]) - 1

    @property
    def nonconstant_terms(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        zero = tuple(0 for _ in range(self.n + 1))
        return tuple(tuple(w for w in s.exponents if w != zero) for s in self.supports)

    def tuples(self) -> list[tuple[tuple[int, ...], ...]]:
        """All choices of one nonconstant exponent per support."""
        return list(itertools.product(*self.nonconstant_terms))

    def term_value(self, i: int, w, alpha) -> Fraction:
        return self.supports[i].valuation(w) + pair_exponent(w, alpha)

    def point_at(self, s):
        if self.direction is None:
            return self.point
        return tuple(b + s * d for b, d in zip(self.point, self.direction))


def normalize_cell(curve: TropicalCurve, cell, pivots=None) -> CellContext:
    """Shift each support so that a minimal term on the cell becomes 1.

    By default the pivot is the lex-smallest minimal exponent.  ``pivots``
    overrides that choice with one original exponent per support.
    """
    label = cell if isinstance(cell, str) else curve.label(cell)
    cell = curve.cell(label) if isinstance(cell, str) else cell
    minimal = cell.minimal
    if pivots is None:
        pivots = tuple(min(m) for m in minimal)
    else:
        pivots = tuple(tuple(int(x) for x in p) for p in pivots)
        for p, m in zip(pivots, minimal):
            if p not in m:
                raise InputError(f"pivot {p} is not a minimal term on {label}")
    shifted = []
    for s, p in zip(curve.supports, pivots):
        pv = s.valuation(p)
        shifted.append(ValuedSupport.build({vsub(w, p): v - pv for w, v in s.terms}))
    rows, special, alt = [], None, None
    for i, (m, p) in enumerate(zip(minimal, pivots)):
        others = sorted((vsub(w, p) for w in m if w != p), reverse=True)
        if len(others) == 1:
            rows.append(others[0])
        elif len(others) == 2:
            if special is not None:
                raise AssumptionError("two supports with three minimal terms at a vertex", cell=label)
            special = i
            rows.append(others[0])
            alt = others[1]
        else:
            raise AssumptionError(f"{len(m)} minimal terms on a curve cell", cell=label)
    if isinstance(cell, CurveVertex):
        kind, point, direction, length = "vertex", cell.point, None, None
        mult = None
    else:
        kind, point, direction, length = "edge", cell.base, cell.direction, cell.length
        mult = cell.multiplicity
    return CellContext(kind, label, point, direction, length, tuple(shifted),
                       tuple(rows), special, alt, mult, pivots)


def edge_direction_from_rows(rows) -> tuple[int, ...]:
    """Primitive chart direction annihilated by the given exponent rows."""
    chart = [r[1:] for r in rows]
    ker = nullspace(chart)
    if len(ker) != 1:
        raise AssumptionError("rows do not determine a unique edge direction")
    return primitive(ker[0])
