"""Exact rational polyhedra via the double description method.

A polyhedron is stored by generators (points, rays, lines).  Inequality
systems are converted with an incremental double description over the
integers; adjacency of extreme rays uses the combinatorial test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import (clear_denominators, dot, nullspace, primitive, rank,
                      rref, solve_affine, vadd, vscale, vsub)


def _int_row(row) -> tuple[int, ...]:
    return clear_denominators(row)


def _dd_cone(constraints: Sequence[Sequence[int]], dim: int):
    """Generators of the cone {z : h.z <= 0 for every h}.

    Returns ``(lines, rays)`` as lists of integer tuples.
    """
    lines = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[tuple[int, ...]] = []
    processed: list[tuple[int, ...]] = []
    for h in constraints:
        if not any(h):
            continue
        vals = [dot(h, l) for l in lines]
        idx = next((i for i, v in enumerate(vals) if v != 0), None)
        if idx is not None:
            l0 = lines.pop(idx)
            v0 = vals.pop(idx)
            if v0 > 0:
                l0 = tuple(-x for x in l0)
                v0 = -v0
            new_lines = []
            for l, v in zip(lines, vals):
                if v:
                    # l - (v / v0) l0, scaled by |v0|
                    l = tuple(-v0 * a + v * b for a, b in zip(l, l0))
                    l = clear_denominators(l)
                new_lines.append(l)
            lines = new_lines
            new_rays = []
            for r in rays:
                hr = dot(h, r)
                if hr:
                    r = tuple(-v0 * a + hr * b for a, b in zip(r, l0))
                    r = clear_denominators(r)
                new_rays.append(r)
            rays = new_rays + [clear_denominators(l0)]
            processed.append(tuple(h))
            continue
        processed.append(tuple(h))
        pos, neg, zero = [], [], []
        for r in rays:
            hr = dot(h, r)
            (pos if hr > 0 else neg if hr < 0 else zero).append((r, hr))
        if not pos:
            continue
        tight = {}
        for r, _ in pos + neg + zero:
            tight[r] = frozenset(i for i, c in enumerate(processed[:-1]) if dot(c, r) == 0)
        survivors = [r for r, _ in neg + zero]
        candidates = [r for r, _ in pos + neg + zero]
        created = []
        for p, hp in pos:
            for q, hq in neg:
                common = tight[p] & tight[q]
                if any(u != p and u != q and common <= tight[u] for u in candidates):
                    continue
                new = tuple(hp * b - hq * a for a, b in zip(p, q))
                created.append(clear_denominators(new))
        rays = list(dict.fromkeys(survivors + created))
    return lines, rays


@dataclass(frozen=True)
class Polyhedron:
    """Closed rational polyhedron given by generators.

    The set is conv(points) + cone(rays) + span(lines).  ``points`` is
    never empty.
    """

    points: tuple
    rays: tuple = ()
    lines: tuple = ()

    @property
    def ambient_dim(self) -> int:
        return len(self.points[0])

    def directions(self) -> list[tuple]:
        base = self.points[0]
        return ([vsub(p, base) for p in self.points[1:]]
                + list(self.rays) + list(self.lines))

    @property
    def dim(self) -> int:
        return rank([d for d in self.directions()]) if self.directions() else 0

    def is_bounded(self) -> bool:
        return not self.rays and not self.lines

    def interior_point(self) -> tuple[Fraction, ...]:
        n = len(self.points)
        centre = tuple(sum((Fraction(p[i]) for p in self.points), Fraction(0)) / n
                       for i in range(self.ambient_dim))
        for r in self.rays:
            centre = vadd(centre, r)
        return centre

    def linear_span_basis(self) -> list[tuple]:
        basis = []
        for d in self.directions():
            if any(d) and rank(basis + [d]) > len(basis):
                basis.append(d)
        return basis

    def affine_hull_equations(self) -> list[tuple]:
        """Rows (a, b) with a.x = b on the polyhedron, in RREF."""
        dirs = self.directions()
        dim = self.ambient_dim
        normals = nullspace(dirs, dim) if dirs else nullspace([], dim)
        if not normals:
            return []
        base = self.points[0]
        rows = [tuple(a) + (dot(a, base),) for a in normals]
        red, _ = rref(rows)
        return [tuple(r) for r in red]

    def contains(self, x, strict_relative=False) -> bool:
        """Membership test; ``strict_relative`` asks for the relative interior."""
        for a, b in self.inequalities():
            val = dot(a, x)
            if val < b or (strict_relative and val == b):
                return False
        for row in self.affine_hull_equations():
            if dot(row[:-1], x) != row[-1]:
                return False
        return True

    def local_frame(self):
        """Affine chart of the affine hull: base point and lattice-free basis."""
        return self.points[0], self.linear_span_basis()

    def inequalities(self) -> list[tuple]:
        """Facet inequalities (a, b) meaning a.x >= b, restricted to the hull.

        Each inequality is written in ambient coordinates; only its
        restriction to the affine hull is meaningful.
        """
        cache = _FACET_CACHE.get(self)
        if cache is not None:
            return cache
        base, basis = self.local_frame()
        k = len(basis)
        if k == 0:
            _FACET_CACHE[self] = []
            return []
        loc_points = [_coords_in(basis, vsub(p, base)) for p in self.points]
        loc_rays = [_coords_in(basis, r) for r in self.rays]
        loc_lines = [_coords_in(basis, l) for l in self.lines]
        local = local_facets(loc_points, loc_rays, loc_lines, k)
        result = []
        gram_solver = _lift_functional(basis)
        for a_loc, c in local:
            a = gram_solver(a_loc)
            b = c + dot(a, base)
            result.append((a, b))
        _FACET_CACHE[self] = result
        return result

    def faces_of_codim_one(self) -> list["Polyhedron"]:
        out = []
        for a, b in self.inequalities():
            face = self.intersect_hyperplane(a, b)
            if face is not None:
                out.append(face)
        return out

    def intersect_hyperplane(self, a, b):
        return polyhedron_from_constraints(
            self.ambient_dim,
            equalities=[(a, b)] + [(r[:-1], r[-1]) for r in self.affine_hull_equations()],
            inequalities=self.inequalities())

    def split(self, a, b):
        """Pieces of full dimension on either side of a.x = b."""
        eqs = [(r[:-1], r[-1]) for r in self.affine_hull_equations()]
        ineqs = self.inequalities()
        pieces = []
        for sign in (1, -1):
            p = polyhedron_from_constraints(
                self.ambient_dim, equalities=eqs,
                inequalities=ineqs + [(vscale(sign, a), sign * b)])
            if p is not None and p.dim == self.dim:
                pieces.append(p)
        return pieces

    def canonical(self) -> "Polyhedron":
        """Unique generator description: extreme points, primitive rays, and
        lines reduced to an echelon basis (points then taken modulo lines)."""
        dim = self.ambient_dim
        lines = []
        if self.lines:
            red, _ = rref(self.lines)
            lines = [primitive(r) for r in red]
        if lines:
            # project points and rays onto the complement of the lines
            normal_rows, pivots = rref(lines)

            def reduce(v):
                v = list(Fraction(x) for x in v)
                for row, p in zip(normal_rows, pivots):
                    if v[p]:
                        f = v[p]
                        v = [x - f * y for x, y in zip(v, row)]
                return tuple(v)
        else:
            def reduce(v):
                return tuple(Fraction(x) for x in v)
        pts = {reduce(p) for p in self.points}
        rays = set()
        for r in self.rays:
            rr = reduce(r)
            if any(rr):
                rays.add(primitive(rr))
        pts, rays = _prune_generators(sorted(pts), sorted(rays), dim)
        return Polyhedron(tuple(pts), tuple(rays), tuple(lines))

    def key(self):
        c = self.canonical()
        return (c.points, c.rays, c.lines)

    def to_json(self) -> dict:
        return {
            "points": [[str(x) for x in p] for p in self.points],
            "rays": [[str(x) for x in r] for r in self.rays],
            "lines": [[str(x) for x in l] for l in self.lines],
        }

    def affine_image(self, matrix, offset=None) -> "Polyhedron":
        """Image under x -> matrix x + offset; matrix is a list of rows."""
        def apply(v, translate):
            out = tuple(dot(row, v) for row in matrix)
            if translate and offset is not None:
                out = vadd(out, offset)
            return out
        pts = tuple(apply(p, True) for p in self.points)
        rays = tuple(r for r in (apply(r, False) for r in self.rays) if any(r))
        lines = tuple(l for l in (apply(l, False) for l in self.lines) if any(l))
        return Polyhedron(pts, rays, lines)


_FACET_CACHE: dict = {}


def _coords_in(basis, v):
    """Coordinates of v in a basis of a subspace containing it."""
    k = len(basis)
    rows = [[basis[j][i] for j in range(k)] for i in range(len(v))]
    sol = solve_affine(rows, list(v), k)
    if sol is None:
        raise ValueError("vector outside the span")
    return sol[0]


def _lift_functional(basis):
    """Return a map sending a functional on span(basis) (given by its
    values on the basis) to an ambient functional with those values."""
    k = len(basis)
    dim = len(basis[0])

    def lift(values):
        sol = solve_affine([list(b) for b in basis], list(values), dim)
        x0 = sol[0]
        return tuple(x0)
    return lift if k else (lambda values: tuple(Fraction(0) for _ in range(dim)))


def _prune_generators(points, rays, dim):
    """Drop points and rays that are not extreme."""
    if len(points) + len(rays) <= 1:
        return points, rays
    # homogenize and compute extreme rays of the cone they span
    gens = [tuple(p) + (Fraction(1),) for p in points] + [tuple(r) + (Fraction(0),) for r in rays]
    ints = [clear_denominators(g) for g in gens]
    keep_points, keep_rays = [], []
    for i, g in enumerate(ints):
        others = [h for j, h in enumerate(ints) if j != i]
        if _in_cone(g, others):
            continue
        if i < len(points):
            keep_points.append(points[i])
        else:
            keep_rays.append(rays[i - len(points)])
    return keep_points, keep_rays


def _in_cone(g, gens) -> bool:
    """Is g a nonnegative combination of gens?  Solved by a small LP-free
    double description: g in cone iff every facet of cone(gens) holds at g."""
    if not gens:
        return not any(g)
    if rank(gens) < rank(gens + [g]):
        return False
    dim = len(g)
    # inequalities h.x <= 0 valid on all gens: cone {h : h.gen <= 0}
    lines, rays = _dd_cone([tuple(x for x in gen) for gen in gens], dim)
    # dual cone generators: g in cone(gens) iff h.g <= 0 for all h
    for h in rays:
        if dot(h, g) > 0:
            return False
    for l in lines:
        if dot(l, g) != 0:
            return False
    return True


def local_facets(points, rays, lines, k):
    """Facet inequalities (a, c) meaning a.t >= c of a full-dimensional
    polyhedron in R^k given by generators."""
    constraints = []
    for p in points:
        # -a.p + c <= 0
        constraints.append(_int_row([-x for x in p] + [1]))
    for r in rays:
        constraints.append(_int_row([-x for x in r] + [0]))
    for l in lines:
        constraints.append(_int_row([-x for x in l] + [0]))
        constraints.append(_int_row(list(l) + [0]))
    dual_lines, dual_rays = _dd_cone(constraints, k + 1)
    if any(any(l[:k]) for l in dual_lines):
        raise ValueError("polyhedron is not full dimensional in its chart")
    out = []
    for r in dual_rays:
        a = r[:k]
        if not any(a):
            continue
        out.append((tuple(Fraction(x) for x in a), Fraction(r[k])))
    return out


def polyhedron_from_constraints(dim: int, equalities=(), inequalities=()):
    """Polyhedron {x : a.x = b for equalities, a.x >= b for inequalities}.

    Returns ``None`` for the empty set.
    """
    eq_rows = [list(a) for a, _ in equalities]
    eq_rhs = [b for _, b in equalities]
    sol = solve_affine(eq_rows, eq_rhs, dim)
    if sol is None:
        return None
    x0, basis = sol
    k = len(basis)
    if k == 0:
        for a, b in inequalities:
            if dot(a, x0) < b:
                return None
        return Polyhedron((x0,))
    # a.(x0 + N t) >= b  <=>  -(aN).t + (b - a.x0) tau <= 0
    cons = [_int_row([0] * k + [-1])]
    for a, b in inequalities:
        aN = [dot(a, col) for col in basis]
        cons.append(_int_row([-x for x in aN] + [b - dot(a, x0)]))
    lines, rays = _dd_cone(cons, k + 1)
    pts, recc = [], []
    for r in rays:
        if r[k] > 0:
            t = [Fraction(x, r[k]) for x in r[:k]]
            pts.append(t)
        else:
            recc.append(r[:k])
    if not pts:
        return None

    def lift(t, translate=True):
        v = tuple(sum((t[j] * basis[j][i] for j in range(k)), Fraction(0)) for i in range(dim))
        return vadd(v, x0) if translate else v
    points = tuple(lift(t) for t in pts)
    out_rays = tuple(primitive(lift(r, False)) for r in recc)
    out_lines = tuple(primitive(lift(l[:k], False)) for l in lines if any(l[:k]))
    return Polyhedron(points, out_rays, out_lines)


def open_cell_nonempty(dim, equalities, weak, strict):
    """Closed polyhedron of {eq, weak >=, strict >} if the open cell is
    nonempty, else ``None``.

    The open cell is nonempty exactly when the closed polyhedron is
    nonempty and no strict inequality is constant on it.
    """
    poly = polyhedron_from_constraints(dim, equalities, list(weak) + list(strict))
    if poly is None:
        return None
    for a, b in strict:
        if all(dot(a, p) == b for p in poly.points) and \
                all(dot(a, r) == 0 for r in poly.rays) and \
                all(dot(a, l) == 0 for l in poly.lines):
            return None
    return poly


def convex_hull(points: Sequence[Sequence]) -> Polyhedron:
    pts = sorted({tuple(Fraction(x) for x in p) for p in points})
    return Polyhedron(tuple(pts)).canonical()
