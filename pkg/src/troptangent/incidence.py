"""Tropical Gauss graph, Gauss image, and dual and tangential varieties.

The graph of the Gauss map is a one-dimensional complex whose cells pair
a moving point of the curve with a moving Plücker vector.  Over each cell
the hyperplanes (dual) or points (tangential) incident to the tangent
line form a polyhedral fiber; pushing these incidence cells forward with
lattice indices gives the weighted tropical varieties.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .complexes import WeightedComplex
from .curve import TropicalCurve, affine_span_dimension, degree, normalize_cell
from .errors import HypothesisError, InputError, NotApplicable
from .lattice import (INF, clear_denominators, is_inf, lattice_index, maximal_minors, minor_delta,
                      primitive, solve_affine, span_contains, vadd, vscale,
                      vsub)
from .polyhedra import Polyhedron, open_cell_nonempty
from .tangents import (coordinate_direction, critical_locus, edge_tangent_forms, index_pairs,
                       satisfies_plucker_relations, tangent_family,
                       vanishing_pluckers)


@dataclass(frozen=True)
class GraphCell:
    """``(alpha, beta) + t * (d_alpha, d_beta)`` for 0 <= t <= length."""

    alpha: tuple
    beta: tuple
    d_alpha: tuple
    d_beta: tuple
    length: object
    multiplicity: int
    source: str

    def at(self, t):
        a = tuple(x + t * d for x, d in zip(self.alpha, self.d_alpha))
        b = tuple(x if is_inf(x) else x + t * d for x, d in zip(self.beta, self.d_beta))
        return a, b

    def split(self, t) -> tuple["GraphCell", "GraphCell"]:
        if t <= 0 or (not is_inf(self.length) and t >= self.length):
            raise ValueError("split parameter outside the cell")
        a, b = self.at(t)
        rest = INF if is_inf(self.length) else self.length - t
        return (GraphCell(self.alpha, self.beta, self.d_alpha, self.d_beta, t,
                          self.multiplicity, self.source),
                GraphCell(a, b, self.d_alpha, self.d_beta, rest, self.multiplicity, self.source))

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "alpha": [str(x) for x in self.alpha],
            "beta": [str(x) for x in self.beta],
            "d_alpha": list(self.d_alpha),
            "d_beta": list(self.d_beta),
            "length": str(self.length),
            "multiplicity": self.multiplicity,
        }


@dataclass
class GaussGraph:
    n: int
    pairs: list
    vanishing: set
    cells: list
    families: dict = field(default_factory=dict)

    @property
    def live_pairs(self) -> list:
        return [p for p in self.pairs if p not in self.vanishing]

    def to_json(self) -> dict:
        return {
            "pairs": ["".join(map(str, p)) for p in self.pairs],
            "vanishing": ["".join(map(str, p)) for p in sorted(self.vanishing)],
            "cells": [c.to_json() for c in self.cells],
        }


def require_not_line(curve: TropicalCurve):
    if degree(curve) == 1:
        raise HypothesisError("the curve has degree one; the Gauss image needs a curve that is not a line")


def require_not_planar(curve: TropicalCurve):
    n = curve.n
    if n == 2:
        raise HypothesisError("a plane curve lies in its plane; the tangential variety "
                              "needs a curve not contained in a plane")
    if affine_span_dimension(curve) < n:
        raise HypothesisError("the tropical curve spans a proper affine subspace; the "
                              "tangential variety needs a curve not contained in a plane")


def graph_complex(curve: TropicalCurve, pivots: dict | None = None) -> GaussGraph:
    """Tropical graph of the Gauss map as a list of weighted 1-cells."""
    n = curve.n
    pairs = index_pairs(n)
    vanishing = vanishing_pluckers(curve)
    cells: list[GraphCell] = []
    families: dict = {}
    pivots = pivots or {}
    for k, vertex in enumerate(curve.vertices):
        label = f"V{k}"
        ctx = normalize_cell(curve, label, pivots.get(label))
        fam = tangent_family(ctx)
        _check_vanishing(fam.base, pairs, vanishing, label)
        families[label] = fam
        for j, b in enumerate(fam.branches):
            cells.append(GraphCell(vertex.point, b.start, tuple(0 for _ in range(n)),
                                   b.direction, b.length, fam.multiplicity, f"{label}/b{j}"))
    for k, edge in enumerate(curve.edges):
        label = f"E{k}"
        ctx = normalize_cell(curve, label, pivots.get(label))
        crits = critical_locus(ctx)
        stops = [Fraction(0)] + [c.parameter for c in crits] + [edge.length]
        for lo, hi in zip(stops, stops[1:]):
            forms = edge_tangent_forms(ctx, lo, hi)
            beta0 = tuple(INF if is_inf(f) else f[0] + f[1] * lo for f in forms)
            dbeta = tuple(0 if is_inf(f) else int(f[1]) for f in forms)
            _check_vanishing(beta0, pairs, vanishing, label)
            alpha0 = edge.point_at(lo)
            length = INF if is_inf(hi) else hi - lo
            cells.append(GraphCell(alpha0, beta0, edge.direction, dbeta, length,
                                   edge.multiplicity, f"{label}[{lo},{hi}]"))
        for c in crits:
            sub = f"{label}@{c.parameter}"
            fam = tangent_family(ctx, c.point, c)
            fam.label = sub
            families[sub] = fam
            for j, b in enumerate(fam.branches):
                cells.append(GraphCell(c.point, b.start, tuple(0 for _ in range(n)),
                                       b.direction, b.length, fam.multiplicity, f"{sub}/b{j}"))
    return GaussGraph(n, pairs, vanishing, cells, families)


def _check_vanishing(beta, pairs, vanishing, label):
    for p, b in zip(pairs, beta):
        if is_inf(b) != (p in vanishing):
            raise AssertionError(f"vanishing coordinates disagree at {label} for {p}")


def _plucker_chart(graph: GaussGraph, beta) -> tuple:
    """Plücker vector modulo the all-ones direction: live coordinates
    minus the first live one."""
    idx = [graph.pairs.index(p) for p in graph.live_pairs]
    first = beta[idx[0]]
    return tuple(beta[i] - first for i in idx[1:])


def gauss_complex(curve: TropicalCurve, graph: GaussGraph | None = None) -> WeightedComplex:
    """Weighted image of the graph in the Plücker torus (chart: live
    coordinates minus the first live coordinate)."""
    require_not_line(curve)
    graph = graph or graph_complex(curve)
    dim = len(graph.live_pairs) - 1
    out = WeightedComplex(dim)
    for cell in graph.cells:
        base = _plucker_chart(graph, cell.beta)
        direction = _plucker_chart(graph, cell.d_beta)
        if not any(direction):
            continue
        full = tuple(cell.d_alpha) + direction
        index = Fraction(lattice_index([direction]), lattice_index([full]))
        if index.denominator != 1:
            raise AssertionError("non-integral pushforward index")
        if is_inf(cell.length):
            poly = Polyhedron((base,), (primitive(direction),))
        else:
            end = vadd(base, vscale(cell.length, direction))
            poly = Polyhedron(tuple(sorted((base, end))))
        out.add(poly, cell.multiplicity * int(index))
    return out.refine().coarsen()


# ---------------------------------------------------------------------------
# Incidence fibers


def _dual_constraints(n, pairs, live):
    """For each j, the terms beta_ij + y_i (i != j) as (pair index, i)."""
    pos = {p: k for k, p in enumerate(pairs)}
    out = []
    for j in range(n + 1):
        terms = []
        for i in range(n + 1):
            if i == j:
                continue
            p = tuple(sorted((i, j)))
            if p in live:
                terms.append((pos[p], i))
        out.append(terms)
    return out


def _tangential_constraints(n, pairs, live):
    """For each triple i<j<k, the terms beta_jk + x_i, beta_ik + x_j, beta_ij + x_k."""
    pos = {p: k for k, p in enumerate(pairs)}
    out = []
    for tri in itertools.combinations(range(n + 1), 3):
        terms = []
        for m in tri:
            p = tuple(x for x in tri if x != m)
            if p in live:
                terms.append((pos[p], m))
        out.append(terms)
    return out


def _term_row(cell: GraphCell, n, term):
    """Affine function of z = (t, y_1..y_n) as (coefficients, constant)."""
    p, i = term
    coeffs = [Fraction(cell.d_beta[p])] + [Fraction(int(i == k)) for k in range(1, n + 1)]
    return tuple(coeffs), Fraction(cell.beta[p])


def incidence_cells(cell: GraphCell, n, constraints, top_dim):
    """Closed top-dimensional open cells of the incidence set over a graph cell.

    Yields closed polyhedra in z = (t, y_1..y_n).
    """
    width = n + 1
    rows = [[_term_row(cell, n, t) for t in terms] for terms in constraints]
    if any(len(r) < 2 for r in rows):
        return []
    bounds = [((Fraction(1),) + tuple(Fraction(0) for _ in range(n)), Fraction(0))]
    if not is_inf(cell.length):
        bounds.append(((Fraction(-1),) + tuple(Fraction(0) for _ in range(n)), -cell.length))
    found = []

    def diff(a, b):
        return tuple(x - y for x, y in zip(a[0], b[0])), b[1] - a[1]

    def dfs(k, eqs, strict):
        if eqs:
            sol = solve_affine([e[0] for e in eqs], [e[1] for e in eqs], width)
            if sol is None or len(sol[1]) < top_dim:
                return
        if k == len(rows):
            poly = open_cell_nonempty(width, eqs, [], strict + bounds)
            if poly is not None and poly.dim == top_dim:
                found.append(poly)
            return
        terms = rows[k]
        for size in range(2, len(terms) + 1):
            for chosen in itertools.combinations(range(len(terms)), size):
                ref = terms[chosen[0]]
                new_eqs = [diff(terms[c], ref) for c in chosen[1:]]
                new_strict = [diff(terms[c], ref) for c in range(len(terms)) if c not in chosen]
                dfs(k + 1, eqs + new_eqs, strict + new_strict)

    dfs(0, [], [])
    return found


def _pushforward(cell: GraphCell, graph: GaussGraph, poly: Polyhedron, n):
    """Project an incidence cell to the fiber coordinates with its index."""
    proj = [[int(i == k) for k in range(n + 1)] for i in range(1, n + 1)]
    image = poly.affine_image(proj)
    if image.dim != poly.dim:
        return None, 0
    dirs = poly.linear_span_basis()
    dbeta = _plucker_chart(graph, cell.d_beta)
    gens = []
    for d in dirs:
        t = d[0]
        full = tuple(t * x for x in cell.d_alpha) + tuple(t * x for x in dbeta) + tuple(d[1:])
        gens.append(clear_denominators(full))
    projected = [g[len(g) - n:] for g in gens]
    index = Fraction(lattice_index(projected), lattice_index(gens))
    if index.denominator != 1:
        raise AssertionError("non-integral pushforward index")
    return image, int(index)


def _fiber_complex(curve, graph, kind, cells=None) -> WeightedComplex:
    n = graph.n
    live = set(graph.live_pairs)
    if kind == "dual":
        constraints = _dual_constraints(n, graph.pairs, live)
        top = n - 1
    else:
        constraints = _tangential_constraints(n, graph.pairs, live)
        top = 2
    out = WeightedComplex(n)
    for cell in (graph.cells if cells is None else cells):
        for poly in incidence_cells(cell, n, constraints, top):
            image, index = _pushforward(cell, graph, poly, n)
            if image is None:
                continue
            out.add(image, cell.multiplicity * index)
    return out


def dual_complex(curve: TropicalCurve, graph: GaussGraph | None = None, refine=True) -> WeightedComplex:
    """Weighted tropical dual variety in the dual torus chart (y_0 = 0)."""
    require_not_line(curve)
    graph = graph or graph_complex(curve)
    out = _fiber_complex(curve, graph, "dual")
    return out.refine() if refine else out


def tangential_complex(curve: TropicalCurve, graph: GaussGraph | None = None, refine=True) -> WeightedComplex:
    """Weighted tropical tangential variety in the torus chart (x_0 = 0)."""
    require_not_planar(curve)
    graph = graph or graph_complex(curve)
    out = _fiber_complex(curve, graph, "tangential")
    return out.refine() if refine else out


# ---------------------------------------------------------------------------
# Tropical lines from Plücker vectors


@dataclass
class TropLine:
    beta: tuple
    complex: WeightedComplex
    ray_vertices: dict

    @property
    def vertices(self) -> list:
        return self.complex.vertices()

    def rays(self) -> list:
        return [(p.points[0], p.rays[0], w) for p, w in self.complex.cells if p.rays]

    def segments(self) -> list:
        return [(p.points, w) for p, w in self.complex.cells if not p.rays]


def plucker_to_line(beta: Sequence, n: int) -> TropLine:
    """Tropical line in the chart x_0 = 0 with the given Plücker valuations
    (lexicographic pair order; INF marks a vanishing coordinate)."""
    beta = tuple(INF if is_inf(b) else Fraction(b) for b in beta)
    pairs = index_pairs(n)
    if len(beta) != len(pairs):
        raise InputError(f"expected {len(pairs)} Plücker valuations")
    if not satisfies_plucker_relations(beta, n):
        raise InputError("valuations violate the tropical Plücker relations")
    live = {p for p, b in zip(pairs, beta) if not is_inf(b)}
    constraints = _tangential_constraints(n, pairs, live)
    zero_cell = GraphCell(tuple(Fraction(0) for _ in range(n)), beta,
                          tuple(0 for _ in range(n)), tuple(0 for _ in pairs),
                          Fraction(1), 1, "line")
    out = WeightedComplex(n)
    proj = [[int(i == k) for k in range(n + 1)] for i in range(1, n + 1)]
    for poly in incidence_cells(zero_cell, n, constraints, 2):
        image = poly.affine_image(proj)
        if image.dim == 1:
            out.add(image, 1)
    line = out.refine()
    ray_vertices = {}
    if not any(is_inf(b) for b in beta):
        ray_vertices = line_ray_vertices(beta, n)
    return TropLine(beta, line, ray_vertices)


def line_ray_vertices(beta, n) -> dict:
    """Base point of the ray of the line in direction e_i, in homogeneous
    coordinates, from the closed formula."""
    pairs = index_pairs(n)
    pos = {p: k for k, p in enumerate(pairs)}

    def b(i, j):
        return beta[pos[tuple(sorted((i, j)))]]
    out = {}
    for i in range(n + 1):
        others = [j for j in range(n + 1) if j != i]
        top = max(b(i, j) + b(i, k) - b(j, k) for j, k in itertools.combinations(others, 2)) \
            if len(others) >= 2 else Fraction(0)
        point = [Fraction(0)] * (n + 1)
        for j in others:
            point[j] = b(i, j)
        point[i] = top
        out[i] = tuple(point)
    return out


def dehomogenize(point) -> tuple:
    return tuple(x - point[0] for x in point[1:])


# ---------------------------------------------------------------------------
# Fast paths


def tame_vertex_mult(ctx) -> int:
    """|det| of the maximal minors of the rows v', v_1, ..., v_{n-1} at a
    tame vertex."""
    if ctx.kind != "vertex":
        raise NotApplicable("not a vertex", cell=ctx.label)
    rows = list(ctx.rows)
    alt = list(rows)
    alt[ctx.special] = ctx.alt_row
    for pair in index_pairs(ctx.n):
        if minor_delta(rows, pair) == 0 and minor_delta(alt, pair) == 0:
            raise NotApplicable(f"vertex is not tame (pair {pair})", cell=ctx.label)
    minors = {abs(m) for m in maximal_minors([ctx.alt_row] + rows) if m}
    if len(minors) != 1:
        raise AssertionError("maximal minors disagree in absolute value")
    return minors.pop()


def tame_vertex_dual(curve: TropicalCurve, label: str, pivots=None) -> WeightedComplex:
    """Top-dimensional dual contribution of a tame vertex."""
    ctx = normalize_cell(curve, label, pivots)
    mult = tame_vertex_mult(ctx)
    n = curve.n
    k = curve.vertex_index(ctx.point)
    adjacent = [curve.outgoing_direction(e, k) for e in curve.edges_at(k)]
    out = WeightedComplex(n)
    apex = tuple(-x for x in ctx.point)
    for pair in index_pairs(n):
        comp = [coordinate_direction(j, n) for j in range(n + 1) if j not in pair]
        if any(_meets(d, comp) for d in adjacent):
            continue
        gens = [coordinate_direction(i, n) for i in range(n + 1) if i not in pair]
        # cone over the coordinate directions outside the pair has n-1 generators
        poly = Polyhedron((apex,), tuple(gens))
        out.add(poly, mult * lattice_index(gens))
    return out.refine()


def _meets(direction, gens) -> bool:
    return span_contains(gens, direction)


def bergman_edge(curve: TropicalCurve, label: str, kind: str = "dual") -> WeightedComplex:
    """Contribution of an edge all of whose minors are nonzero: the edge
    (negated for the dual) plus the tropical line of the row space of v
    (dual) or of its kernel (tangential)."""
    n = curve.n
    if n != 3:
        raise NotApplicable("Bergman fast path is implemented for curves in 3-space")
    ctx = normalize_cell(curve, label)
    if ctx.kind != "edge":
        raise NotApplicable("not an edge", cell=label)
    pairs = index_pairs(n)
    rows = list(ctx.rows)
    if any(minor_delta(rows, p) == 0 for p in pairs):
        raise NotApplicable("edge lies in a coordinate subspace", cell=label)
    beta = []
    for p in pairs:
        comp = tuple(j for j in range(n + 1) if j not in p)
        m = minor_delta(rows, p) if kind == "tangential" else minor_delta(rows, comp)
        beta.append(Fraction(0) if m else INF)
    line = plucker_to_line(beta, n).complex
    sign = -1 if kind == "dual" else 1
    edge = curve.edges[int(label[1:])]
    start = vscale(sign, edge.base)
    d = vscale(sign, edge.direction)
    out = WeightedComplex(n)
    for poly, w in line.cells:
        ends = [start] if is_inf(edge.length) else [start, vadd(start, vscale(edge.length, d))]
        pts = tuple(vadd(p, e) for p in poly.points for e in ends)
        rays = tuple(poly.rays) + ((d,) if is_inf(edge.length) else ())
        direction = poly.rays[0] if poly.rays else primitive(vsub(poly.points[1], poly.points[0]))
        index = lattice_index([edge.direction, direction])
        out.add(Polyhedron(pts, rays).canonical(), w * index * edge.multiplicity)
    return out.refine()


def graph_cells_from(graph: GaussGraph, prefix: str) -> list:
    """Graph cells whose source is the named curve cell (its edge pieces,
    its interior critical points, or its vertex branches)."""
    out = []
    for c in graph.cells:
        src = c.source
        head = src.split("[")[0].split("@")[0].split("/")[0]
        if head == prefix:
            out.append(c)
    return out


def contribution(curve, graph, prefix, kind="dual") -> WeightedComplex:
    """General-pipeline contribution of one curve cell."""
    return _fiber_complex(curve, graph, kind, graph_cells_from(graph, prefix)).refine()
