"""Newton polytope of a tropical hypersurface from its weighted fan.

The recession fan of a balanced codimension-one complex is the
codimension-one skeleton of the normal fan of a lattice polytope, with
weights equal to lattice lengths of edges.  Vertices are found by ray
shooting: the i-th coordinate of the vertex selected by a generic
direction w is the weighted count of walls crossed by w + t e_i, t > 0.
The hull is then grown with this optimization oracle until every facet
is confirmed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from .complexes import WeightedComplex
from .errors import ComplexError, InconsistencyError
from .lattice import clear_denominators, dot, nullspace, primitive, rank, vadd, vscale, vsub
from .polyhedra import Polyhedron, convex_hull, polyhedron_from_constraints


class _Degenerate(Exception):
    pass


@dataclass(frozen=True)
class _Wall:
    cone: Polyhedron
    normal: tuple[int, ...]
    weight: int


def recession_fan(complex_: WeightedComplex) -> WeightedComplex:
    """Weighted fan of recession cones of the top-dimensional cells."""
    d = complex_.dim
    zero = tuple(Fraction(0) for _ in range(complex_.ambient))
    fan = WeightedComplex(complex_.ambient)
    for poly, w in complex_.cells:
        cone = Polyhedron((zero,), poly.rays, poly.lines)
        if cone.dim == d:
            fan.add(cone, w)
    return fan.refine()


def _walls(fan: WeightedComplex) -> list[_Wall]:
    n = fan.ambient
    out = []
    for cone, w in fan.cells:
        normals = nullspace(cone.linear_span_basis(), n)
        if len(normals) != 1:
            raise ComplexError("fan is not of codimension one")
        out.append(_Wall(cone, primitive(clear_denominators(normals[0])), w))
    return out


def _shoot_directions(n: int) -> list[tuple[int, ...]]:
    """Chart images of the homogeneous unit vectors e_0, ..., e_n."""
    return [tuple(-1 for _ in range(n))] + [tuple(int(i == j) for j in range(n)) for i in range(n)]


def shoot(walls: list[_Wall], direction) -> tuple[int, ...]:
    """Vertex (in Z^{n+1}) minimizing the pairing with a generic direction.

    Raises ``_Degenerate`` when the direction or one of its shifted rays
    meets a wall outside its relative interior.
    """
    n = len(direction)
    for wall in walls:
        if dot(wall.normal, direction) == 0 and wall.cone.contains(direction):
            raise _Degenerate
    vertex = []
    for step in _shoot_directions(n):
        total = 0
        for wall in walls:
            rate = dot(wall.normal, step)
            if rate == 0:
                continue
            t = Fraction(-dot(wall.normal, direction)) / rate
            if t <= 0:
                continue
            hit = vadd(direction, vscale(t, step))
            if wall.cone.contains(hit):
                if not wall.cone.contains(hit, strict_relative=True):
                    raise _Degenerate
                total += wall.weight * abs(rate)
        vertex.append(total)
    return tuple(vertex)


@dataclass(frozen=True)
class LatticePolytope:
    """Lattice polytope in Z^{n+1} lying on a hyperplane sum(x) = degree."""

    vertices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sums = {sum(v) for v in self.vertices}
        if len(sums) != 1:
            raise InconsistencyError(f"vertices do not share a coordinate sum: {sorted(sums)}")

    @property
    def degree(self) -> int:
        return sum(self.vertices[0])

    @property
    def chart_vertices(self) -> list[tuple[int, ...]]:
        return [v[1:] for v in self.vertices]

    @cached_property
    def hull(self) -> Polyhedron:
        return convex_hull(self.chart_vertices)

    @property
    def dim(self) -> int:
        return self.hull.dim

    def facets(self) -> list[tuple]:
        """Facet inequalities a.x >= b on chart coordinates x = v[1:]."""
        return self.hull.inequalities()

    def _facet_sets(self) -> list[frozenset]:
        pts = self.chart_vertices
        return [frozenset(k for k, p in enumerate(pts) if dot(a, p) == b)
                for a, b in self.facets()]

    def faces(self) -> dict[int, list[frozenset]]:
        """Proper nonempty faces as vertex-index sets, keyed by dimension."""
        pts = self.chart_vertices
        facets = self._facet_sets()
        found = set(facets)
        frontier = list(facets)
        while frontier:
            nxt = []
            for f in frontier:
                for g in facets:
                    h = f & g
                    if h and h not in found:
                        found.add(h)
                        nxt.append(h)
            frontier = nxt
        found.update(frozenset([k]) for k in range(len(pts)))
        out: dict[int, list[frozenset]] = {}
        for face in found:
            idx = sorted(face)
            d = rank([vsub(pts[k], pts[idx[0]]) for k in idx[1:]]) if len(idx) > 1 else 0
            if d < self.dim:
                out.setdefault(d, []).append(face)
        return out

    def f_vector(self) -> list[int]:
        faces = self.faces()
        return [len(faces.get(d, [])) for d in range(self.dim)]

    def edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(f)) for f in self.faces().get(1, []))

    def lattice_points(self) -> list[tuple[int, ...]]:
        """All lattice points, by a box scan with exact facet tests."""
        pts = self.chart_vertices
        n = len(pts[0])
        lo = [min(p[i] for p in pts) for i in range(n)]
        hi = [max(p[i] for p in pts) for i in range(n)]
        hull = self.hull
        tests = hull.inequalities()
        eqs = hull.affine_hull_equations()
        out = []
        for x in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            if all(dot(a, x) >= b for a, b in tests) and all(dot(r[:-1], x) == r[-1] for r in eqs):
                out.append((self.degree - sum(x),) + x)
        return out

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "f_vector": self.f_vector(),
            "lattice_points": len(self.lattice_points()),
            "degree": str(self.degree),
        }


def normal_fan_skeleton(polytope: LatticePolytope) -> WeightedComplex:
    """Tropical hypersurface of the polytope with zero coefficients: the
    normal cones of edges weighted by lattice length."""
    pts = polytope.chart_vertices
    n = len(pts[0])
    fan = WeightedComplex(n)
    for i, j in polytope.edges():
        diff = vsub(pts[j], pts[i])
        cone = polyhedron_from_constraints(
            n, [(diff, 0)], [(vsub(p, pts[i]), 0) for p in pts])
        fan.add(cone, gcd(*diff))
    return fan.refine()


def _generic(n: int, m: int) -> tuple[int, ...]:
    return tuple(m ** k for k in range(n))


class _Oracle:
    def __init__(self, walls, n, m):
        self.walls = walls
        self.n = n
        self.m = m

    def __call__(self, direction, normal=None, degree=0):
        """Vertex for ``direction``, perturbing the tie-break until generic.

        With ``normal`` the vertex minimizes ``normal`` first; the weight
        on it exceeds the spread of the tie-break over a polytope whose
        chart coordinates lie in [0, degree].
        """
        m = self.m
        while True:
            tie = _generic(self.n, m)
            target = vadd(direction, tie)
            if normal is not None:
                target = vadd(target, vscale(degree * sum(tie) + 1, normal))
            try:
                return shoot(self.walls, target)
            except _Degenerate:
                m += 1

    def scaled(self, normal, degree):
        return self(tuple(0 for _ in range(self.n)), normal, degree)


def newton_polytope(dual: WeightedComplex, check_balanced: bool = True) -> LatticePolytope:
    """Newton polytope (up to translation into the positive orthant,
    touching every coordinate hyperplane) of a tropical hypersurface."""
    n = dual.ambient
    if dual.dim != n - 1:
        raise ComplexError(f"expected a complex of dimension {n - 1}, got {dual.dim}")
    fan = recession_fan(dual)
    if check_balanced and not fan.is_balanced():
        raise ComplexError("input complex is not balanced")
    walls = _walls(fan)
    slope = max((abs(x) for w in walls for r in w.cone.rays + w.cone.lines for x in r), default=1)
    oracle = _Oracle(walls, n, slope + 1)
    first = oracle(tuple(0 for _ in range(n)))
    degree = sum(first)
    found = {first}
    signs = [tuple(s) for s in itertools.product((1, -1), repeat=n)]
    for perm in itertools.permutations(range(n)):
        for sign in signs:
            normal = tuple(sign[k] * (perm[k] + 1) for k in range(n))
            found.add(oracle.scaled(normal, degree))
    if len({sum(v) for v in found}) != 1:
        raise InconsistencyError("ray shooting gives vertices of different degrees")
    while True:
        hull = convex_hull([v[1:] for v in found])
        normals = [primitive(clear_denominators(row[:-1])) for row in hull.affine_hull_equations()]
        normals = [vscale(s, a) for a in normals for s in (1, -1)]
        normals += [primitive(clear_denominators(a)) for a, _ in hull.inequalities()]
        new = {v for v in (oracle.scaled(a, degree) for a in normals) if not hull.contains(v[1:])}
        if not new:
            break
        found |= new
        if len({sum(v) for v in found}) != 1:
            raise InconsistencyError("ray shooting gives vertices of different degrees")
    extreme = {tuple(int(x) for x in p) for p in convex_hull([v[1:] for v in found]).points}
    polytope = LatticePolytope(tuple(sorted(v for v in found if v[1:] in extreme)))
    if not normal_fan_skeleton(polytope).equivalent(fan):
        raise InconsistencyError("the reconstructed polytope does not reproduce the input fan")
    return polytope


def degree(polytope: LatticePolytope) -> int:
    return polytope.degree
