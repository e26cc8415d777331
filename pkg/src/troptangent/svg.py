"""Plane projections of polyhedral complexes as SVG figures."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from pathlib import Path
from xml.sax.saxutils import escape

from .complexes import WeightedComplex
from .curve import TropicalCurve
from .errors import TropTangentError
from .lattice import rank
from .polyhedra import Polyhedron


class ProjectionError(TropTangentError):
    code = "degenerate_projection"


def curve_complex(curve: TropicalCurve) -> WeightedComplex:
    """The curve as a weighted one-dimensional complex."""
    out = WeightedComplex(curve.n)
    for e in curve.edges:
        if e.bounded:
            out.add(Polyhedron((e.base, e.point_at(e.length))), e.multiplicity)
        else:
            out.add(Polyhedron((e.base,), (e.direction,)), e.multiplicity)
    return out


def parse_projection(text: str) -> list[list[Fraction]]:
    """Matrix from ``"a,b,c;d,e,f"`` (rows separated by semicolons)."""
    try:
        rows = [[Fraction(x) for x in row.split(",")] for row in text.split(";")]
    except (ValueError, ZeroDivisionError):
        raise ProjectionError(f"cannot read projection matrix {text!r}") from None
    if len(rows) != 2 or len({len(r) for r in rows}) != 1:
        raise ProjectionError("the projection needs two rows of equal length")
    return rows


def random_projection(n: int, seed: int) -> list[list[Fraction]]:
    rng = random.Random(seed)
    while True:
        rows = [[Fraction(rng.randint(-5, 5)) for _ in range(n)] for _ in range(2)]
        if rank(rows) == 2:
            return rows


def _apply(matrix, v):
    return tuple(sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in matrix)


def _project(complex_: WeightedComplex, matrix):
    """Projected cells as (points, rays, weight); rejects collapsing maps."""
    out = []
    for poly, w in complex_.cells:
        if poly.lines:
            raise ProjectionError("cells with lineality cannot be drawn")
        pts = [_apply(matrix, p) for p in poly.points]
        rays = [_apply(matrix, r) for r in poly.rays]
        dirs = [tuple(a - b for a, b in zip(p, pts[0])) for p in pts[1:]] + rays
        if (rank(dirs) if dirs else 0) != poly.dim:
            raise ProjectionError("the projection collapses a cell")
        if any(not any(r) for r in rays):
            raise ProjectionError("the projection kills a ray direction")
        out.append((pts, rays, w))
    return out


def _ordered_polygon(pts):
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    return sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def render_projection(complex_, projection="random-seeded", path=None, seed: int = 0,
                      size: int = 480) -> str:
    """Draw a complex (or a tropical curve) under a linear map to the plane.

    ``projection`` is a 2 x n matrix, a ``"a,b;c,d"`` string, or
    ``"random-seeded"``.  Returns the SVG text and writes it to ``path``
    when given.
    """
    if isinstance(complex_, TropicalCurve):
        complex_ = curve_complex(complex_)
    n = complex_.ambient
    if projection == "random-seeded":
        matrix = random_projection(n, seed)
    elif isinstance(projection, str):
        matrix = parse_projection(projection)
    else:
        matrix = [[Fraction(x) for x in row] for row in projection]
    if len(matrix[0]) != n:
        raise ProjectionError(f"projection has {len(matrix[0])} columns for a complex in dimension {n}")
    if rank(matrix) < 2:
        raise ProjectionError("projection matrix has rank below 2")
    cells = _project(complex_, matrix)
    body: list[str] = []
    if cells:
        vertices = sorted({p for pts, rays, _ in cells for p in pts})
        xs = [float(p[0]) for p in vertices]
        ys = [float(p[1]) for p in vertices]
        span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
        cx, cy = (max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2
        reach = span * 0.6
        scale = (size * 0.42) / (span * 1.1)

        def screen(x, y):
            return (size / 2 + (x - cx) * scale, size / 2 - (y - cy) * scale)

        def far(p, r):
            norm = (float(r[0]) ** 2 + float(r[1]) ** 2) ** 0.5
            return (float(p[0]) + reach * float(r[0]) / norm, float(p[1]) + reach * float(r[1]) / norm)

        for pts, rays, w in cells:
            fpts = [(float(p[0]), float(p[1])) for p in pts]
            ends = [far(p, r) for p in pts for r in rays] if rays else []
            outline = fpts + ends
            if len(outline) >= 3 and (len(pts) + len(rays)) >= 3:
                poly = _ordered_polygon(outline)
                coords = " ".join("%.2f,%.2f" % screen(*q) for q in poly)
                body.append(f'<polygon points="{coords}" fill="#4a7ab8" fill-opacity="0.15" stroke="#4a7ab8"/>')
                label_at = (sum(q[0] for q in poly) / len(poly), sum(q[1] for q in poly) / len(poly))
            else:
                a = fpts[0]
                b = ends[0] if ends else fpts[1]
                (x1, y1), (x2, y2) = screen(*a), screen(*b)
                body.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                            'stroke="black" stroke-width="1.5"/>')
                label_at = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            if w != 1:
                x, y = screen(*label_at)
                body.append(f'<text x="{x + 4:.2f}" y="{y - 4:.2f}" font-size="12">{escape(str(w))}</text>')
        for p in vertices:
            x, y = screen(float(p[0]), float(p[1]))
            body.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="black"/>')
    svg = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">\n'
           + "".join(f"  {line}\n" for line in body)
           + "</svg>\n")
    if path is not None:
        Path(path).write_text(svg)
    return svg
