"""Walk through the plane cubic x^2 y + x^2 z + y^2 z with trivial valuations.

Run with ``python demos/plane_cubic.py``.
"""

from troptangent.curve import degree, intersect_curve, normalize_cell
from troptangent.incidence import dual_complex, gauss_complex, graph_complex
from troptangent.lattice import INF
from troptangent.newton import newton_polytope
from troptangent.problem import fixture
from troptangent.tangents import edge_tangent_forms


def fmt(v):
    return "(" + ", ".join(str(x) for x in v) + ")"


def rays(complex_):
    return sorted((p.rays[0], w) for p, w in complex_.cells if p.rays)


curve = intersect_curve(fixture("plane_cubic").supports())
print(f"tropical cubic of degree {degree(curve)}")
for v in curve.vertices:
    print("  vertex", fmt(v.point))
for k, e in enumerate(curve.edges):
    print(f"  E{k}: ray {e.direction} with multiplicity {e.multiplicity}")

print("\nvaluations of the Plücker coordinates (q01, q02, q12) along each ray,")
print("as (value at the vertex, slope):")
for k in range(len(curve.edges)):
    forms = edge_tangent_forms(normalize_cell(curve, f"E{k}"), 0, INF)
    print(f"  E{k}:", [(str(a), str(b)) for a, b in forms])

graph = graph_complex(curve)
fam = graph.families["V0"]
print("\nat the vertex the tangent is not determined; its family starts at",
      fmt(fam.base), "and moves along", [b.direction for b in fam.branches])

print("\nGauss image (rays with weights):", rays(gauss_complex(curve, graph)))
dual = dual_complex(curve, graph)
print("dual curve (rays with weights):  ", rays(dual))

polytope = newton_polytope(dual)
print(f"\nthe dual curve has degree {polytope.degree};")
print("a nodal cubic has dual degree 3*2 - 2 = 4, as expected")
print("Newton polygon of the dual:", polytope.chart_vertices)
