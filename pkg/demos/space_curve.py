"""Walk through a degree nine space curve cut out by two quartics.

f1 = x0 x2^3 + x0^2 x2 x3 + x3^4 and f2 = t^3 x0 x3^2 + x1^2 x2 + x1 x3^2.
Run with ``python demos/space_curve.py [out_dir]``; figures go to out_dir
(default: the current directory).
"""

import sys
import time
from pathlib import Path

from troptangent.curve import degree, intersect_curve, normalize_cell
from troptangent.incidence import dual_complex, gauss_complex, graph_complex, tangential_complex
from troptangent.newton import newton_polytope
from troptangent.problem import fixture
from troptangent.svg import curve_complex, render_projection
from troptangent.tangents import critical_locus

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
start = time.perf_counter()


def fmt(v):
    return "(" + ", ".join(str(x) for x in v) + ")"


curve = intersect_curve(fixture("p3_curve").supports())
print(f"tropical curve of degree {degree(curve)} with {len(curve.vertices)} vertices "
      f"and {len(curve.edges)} edges")
for k, e in enumerate(curve.edges):
    end = fmt(e.point_at(e.length)) if e.bounded else "infinity"
    print(f"  E{k}: {fmt(e.base)} -> {end}, direction {e.direction}")

print("\npoints where two leading terms of a Plücker coordinate can cancel:")
for k in range(len(curve.edges)):
    for c in critical_locus(normalize_cell(curve, f"E{k}")):
        print(f"  on E{k} at {fmt(c.point)}")

graph = graph_complex(curve)
print("\ntangent families at the vertices:")
for label in ("V0", "V1", "V2"):
    fam = graph.families[label]
    print(f"  {label}: base {fmt(fam.base)}, {len(fam.branches)} branches, "
          f"weight {fam.multiplicity}")

gauss = gauss_complex(curve, graph)
print(f"\nGauss curve: {len(gauss.vertices())} vertices, {len(gauss.bounded())} bounded "
      f"and {len(gauss.unbounded())} unbounded edges")

dual = dual_complex(curve, graph)
polytope = newton_polytope(dual)
print(f"dual surface: {len(dual.cells)} weighted cells, balanced: {dual.is_balanced()}")
print(f"  its Newton polytope has degree {polytope.degree}, f-vector {polytope.f_vector()} "
      f"and {len(polytope.lattice_points())} lattice points")

tau = tangential_complex(curve, graph)
print(f"tangential surface: {len(tau.cells)} weighted cells, balanced: {tau.is_balanced()}")

render_projection(curve_complex(curve), "1,0,-1;0,1,0", out / "space_curve.svg")
render_projection(gauss, "random-seeded", out / "gauss_curve.svg", seed=3)
print(f"\nfigures written to {out / 'space_curve.svg'} and {out / 'gauss_curve.svg'}")
print(f"total time {time.perf_counter() - start:.1f}s")
