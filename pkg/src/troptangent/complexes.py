"""Weighted rational polyhedral complexes.

Cells are closed polyhedra of one common dimension carrying integer
weights.  Overlapping cells in the same affine span are cut along each
other's facets and weights on identical pieces are added, which gives a
canonical refinement.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import (clear_denominators, dot, lattice_index, rank, rref, saturation_basis,
                      span_contains, vadd, vscale, vsub)
from .polyhedra import (Polyhedron, _coords_in, local_facets,
                        polyhedron_from_constraints)


def _hull_key(poly: Polyhedron):
    rows = poly.affine_hull_equations()
    return tuple(tuple(r) for r in rows)


class _Chart:
    """Affine coordinates on an affine subspace given by a base point and
    an echelon basis of its direction space."""

    def __init__(self, poly: Polyhedron):
        basis = poly.linear_span_basis()
        red, _ = rref(basis)
        self.basis = [tuple(r) for r in red]
        self.base = poly.points[0]
        # reduce the base point to a canonical representative
        self.k = len(self.basis)

    def to_local(self, v, translate=True):
        if translate:
            v = vsub(v, self.base)
        return _coords_in(self.basis, v)

    def to_ambient(self, t, translate=True):
        out = tuple(sum((t[j] * self.basis[j][i] for j in range(self.k)), Fraction(0))
                    for i in range(len(self.base)))
        return vadd(out, self.base) if translate else out

    def local(self, poly: Polyhedron) -> Polyhedron:
        return Polyhedron(tuple(self.to_local(p) for p in poly.points),
                          tuple(self.to_local(r, False) for r in poly.rays),
                          tuple(self.to_local(l, False) for l in poly.lines))

    def ambient(self, poly: Polyhedron) -> Polyhedron:
        return Polyhedron(tuple(self.to_ambient(p) for p in poly.points),
                          tuple(clear_denominators(self.to_ambient(r, False)) for r in poly.rays),
                          tuple(clear_denominators(self.to_ambient(l, False)) for l in poly.lines))


def _local_hrep(poly: Polyhedron, k: int):
    return local_facets(poly.points, poly.rays, poly.lines, k)


def _cuts(poly: Polyhedron, a, c) -> bool:
    """Does the hyperplane a.t = c meet the interior of poly?"""
    vals = [dot(a, p) for p in poly.points]
    hi, lo = max(vals), min(vals)
    up = any(dot(a, r) > 0 for r in poly.rays) or any(dot(a, l) != 0 for l in poly.lines)
    down = any(dot(a, r) < 0 for r in poly.rays) or any(dot(a, l) != 0 for l in poly.lines)
    return (up or hi > c) and (down or lo < c)


def _canonical_hyperplane(a, c):
    k = next(i for i, x in enumerate(a) if x)
    f = a[k]
    return tuple(x / f for x in a), c / f


def _local_key(poly: Polyhedron):
    c = poly.canonical()
    return (c.points, c.rays, c.lines)


def _rebuild(k, facets):
    return polyhedron_from_constraints(k, [], list(facets))


@dataclass
class WeightedComplex:
    """Pure-dimensional weighted complex in Q^ambient."""

    ambient: int
    cells: list = field(default_factory=list)  # list of (Polyhedron, int)

    @property
    def dim(self) -> int:
        return max((p.dim for p, _ in self.cells), default=-1)

    def add(self, poly: Polyhedron, weight: int):
        if weight:
            self.cells.append((poly, weight))

    def refine(self) -> "WeightedComplex":
        """Canonical refinement with weights added on equal pieces."""
        groups = defaultdict(list)
        for poly, w in self.cells:
            groups[_hull_key(poly)].append((poly, w))
        out = []
        for key in sorted(groups, key=repr):
            members = groups[key]
            chart = _Chart(members[0][0])
            k = chart.k
            locs = [(chart.local(p), w) for p, w in members]
            if k == 0:
                total = defaultdict(int)
                for p, w in locs:
                    total[()] += w
                if total[()]:
                    out.append((members[0][0].canonical(), total[()]))
                continue
            hreps = [_local_hrep(p, k) for p, _ in locs]
            hyperplanes = sorted({_canonical_hyperplane(a, c) for h in hreps for a, c in h})
            sums = defaultdict(int)
            reps = {}
            for (p, w), facets in zip(locs, hreps):
                pieces = [(p, list(facets))]
                for a, c in hyperplanes:
                    nxt = []
                    for q, qf in pieces:
                        if _cuts(q, a, c):
                            for sign in (1, -1):
                                f = qf + [(vscale(sign, a), sign * c)]
                                r = _rebuild(k, f)
                                if r is not None and r.dim == k:
                                    nxt.append((r, f))
                        else:
                            nxt.append((q, qf))
                    pieces = nxt
                for q, _ in pieces:
                    kk = _local_key(q)
                    sums[kk] += w
                    reps[kk] = q
            for kk in sorted(sums):
                if sums[kk]:
                    out.append((chart.ambient(reps[kk]).canonical(), sums[kk]))
        out.sort(key=lambda pw: (pw[0].key(), pw[1]))
        return WeightedComplex(self.ambient, out)

    def coarsen(self) -> "WeightedComplex":
        """Merge collinear cells of a one-dimensional complex through
        bivalent vertices of equal weight on both sides."""
        if self.dim != 1:
            return self
        cells = [(p.canonical(), w) for p, w in self.cells]
        while True:
            incident = defaultdict(list)
            for k, (p, _) in enumerate(cells):
                if not p.lines:
                    for q in p.points:
                        incident[q].append(k)
            merge = None
            for q in sorted(incident):
                ks = incident[q]
                if len(ks) != 2:
                    continue
                (p1, w1), (p2, w2) = cells[ks[0]], cells[ks[1]]
                if w1 != w2:
                    continue
                d1 = vsub(p1.interior_point(), q)
                d2 = vsub(p2.interior_point(), q)
                if rank([d1, d2]) == 1 and dot(d1, d2) < 0:
                    merge = q, ks
                    break
            if merge is None:
                break
            q, ks = merge
            (p1, w), (p2, _) = cells[ks[0]], cells[ks[1]]
            points = tuple(x for p in (p1, p2) for x in p.points if x != q)
            rays = p1.rays + p2.rays
            if len(rays) == 2:
                joined = Polyhedron((q,), (), (rays[0],))
            else:
                joined = Polyhedron(points, rays, ())
            cells = [c for k, c in enumerate(cells) if k not in ks] + [(joined.canonical(), w)]
        cells.sort(key=lambda pw: (pw[0].key(), pw[1]))
        return WeightedComplex(self.ambient, cells)

    def equivalent(self, other: "WeightedComplex") -> bool:
        """Same support with the same weights after refinement."""
        joint = WeightedComplex(self.ambient,
                                list(self.cells) + [(p, -w) for p, w in other.cells])
        return not joint.refine().cells

    def multiplicity_at(self, point) -> int:
        """Total weight of top-dimensional cells through a generic point."""
        d = self.dim
        return sum(w for p, w in self.cells if p.dim == d and p.contains(point, strict_relative=True))

    def support_contains(self, point) -> bool:
        return any(p.contains(point) for p, _ in self.cells)

    def vertices(self) -> list:
        pts = set()
        for p, _ in self.cells:
            if not p.lines:
                pts.update(p.points)
        return sorted(pts)

    def bounded(self) -> list:
        return [(p, w) for p, w in self.cells if p.is_bounded()]

    def unbounded(self) -> list:
        return [(p, w) for p, w in self.cells if not p.is_bounded()]

    def is_balanced(self) -> bool:
        return not self.unbalanced_faces()

    def unbalanced_faces(self) -> list:
        """Codimension-one faces where the weighted normal sum fails."""
        bad = []
        seen = set()
        for poly, _ in self.cells:
            for face in poly.faces_of_codim_one():
                key = face.key()
                if key in seen:
                    continue
                seen.add(key)
                if not self._balanced_at(face):
                    bad.append(face)
        return bad

    def _balanced_at(self, face: Polyhedron) -> bool:
        span = face.linear_span_basis()
        sat = saturation_basis(span) if span else []
        for p in _generic_points(face):
            total = None
            ok = True
            for cell, w in self.cells:
                if not cell.contains(p):
                    continue
                if cell.contains(p, strict_relative=True):
                    continue
                through = [f for f in cell.faces_of_codim_one() if f.contains(p)]
                if len(through) != 1 or not through[0].contains(p, strict_relative=True) \
                        or not all(span_contains(through[0].linear_span_basis() or [[0] * self.ambient], d)
                                   for d in span):
                    ok = False
                    break
                inward = clear_denominators(vsub(cell.interior_point(), p))
                c = lattice_index(sat + [inward])
                vec = vscale(Fraction(w, c), inward)
                total = vec if total is None else vadd(total, vec)
            if not ok:
                continue
            if total is None:
                return True
            return span_contains(span, total) if span else not any(total)
        raise ValueError("no generic point found on a face")

    def to_json(self) -> dict:
        return {
            "ambient_dimension": self.ambient,
            "dimension": self.dim,
            "cells": [dict(p.to_json(), multiplicity=w) for p, w in self.cells],
        }


def _generic_points(face: Polyhedron):
    """Candidate relative interior points of a face."""
    params = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 5),
              Fraction(3, 7), Fraction(5, 11), Fraction(7, 13), Fraction(11, 17)]
    if face.dim == 0:
        yield face.points[0]
        return
    centre = face.interior_point()
    dirs = face.directions()
    for t in params:
        p = centre
        for k, d in enumerate(dirs):
            p = vadd(p, vscale(t ** (k + 1) / 7, d))
        if face.contains(p, strict_relative=True):
            yield p
    yield centre
