import itertools

import pytest
from hypothesis import HealthCheck, given, reject, settings, strategies as st

from reference import dual_cells, same_support, tau_support
from troptangent.curve import intersect_curve, normalize_cell
from troptangent.errors import AssumptionError, HypothesisError, InputError, NotApplicable
from troptangent.hypersurface import ValuedSupport
from troptangent.incidence import (GaussGraph, bergman_edge, contribution, dehomogenize,
                                   dual_complex, gauss_complex, graph_complex, plucker_to_line,
                                   tame_vertex_dual, tame_vertex_mult, tangential_complex)
from troptangent.lattice import is_inf
from troptangent.problem import fixture

PROPERTY = settings(max_examples=200, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


def rays_of(complex_):
    return {p.rays[0]: w for p, w in complex_.cells if p.rays}


# -- Gauss graph and image ------------------------------------------------------

def test_space_gauss_image_counts(space_gauss):
    assert len(space_gauss.vertices()) == 6
    assert len(space_gauss.bounded()) == 5
    assert len(space_gauss.unbounded()) == 20
    assert space_gauss.is_balanced()


def test_cubic_gauss_image(cubic_graph, cubic):
    image = gauss_complex(cubic, cubic_graph)
    assert image.vertices() == [(0, 0)]
    assert rays_of(image) == {(-1, -1): 4, (0, 1): 3, (1, 0): 2, (2, 1): 1}
    assert image.is_balanced()


def test_graph_weights(space_graph):
    weights = {}
    for cell in space_graph.cells:
        head = cell.source.split("/b")[0]
        if "/b" in cell.source:
            weights.setdefault(head, set()).add(cell.multiplicity)
    assert weights == {"V0": {5}, "V1": {5}, "V2": {3}}
    assert all(c.multiplicity == 1 for c in space_graph.cells if "/b" not in c.source)


def test_graph_cells_are_continuous(space_graph, space_curve):
    # along every edge the pieces meet end to end
    pieces = {}
    for cell in space_graph.cells:
        if "[" in cell.source:
            pieces.setdefault(cell.source.split("[")[0], []).append(cell)
    assert sorted(pieces) == [f"E{k}" for k in range(7)]
    for cells in pieces.values():
        for a, b in zip(cells, cells[1:]):
            assert a.at(a.length) == (b.alpha, b.beta)


def test_graph_families_at_vertices_are_attached(space_graph):
    for cell in space_graph.cells:
        if cell.source.startswith("V"):
            label = cell.source.split("/b")[0]
            fam = space_graph.families[label]
            assert cell.alpha == fam.point
            assert fam.contains(cell.beta)


# -- dual and tangential varieties --------------------------------------------

def test_space_dual_matches_table(space_dual):
    assert space_dual.is_balanced()
    assert space_dual.equivalent(dual_cells())


def test_printed_dual_table_is_not_balanced():
    assert not dual_cells(with_triangle=False).refine().is_balanced()


def test_space_tangential_support(space_tau):
    assert space_tau.is_balanced()
    assert same_support(space_tau, tau_support())
    assert not same_support(space_tau, tau_support(with_extra=False))


def test_cubic_dual(cubic_dual):
    assert cubic_dual.vertices() == [(0, 0)]
    assert rays_of(cubic_dual) == {(-1, -1): 3, (0, 1): 4, (1, -1): 1, (1, 0): 2}
    assert sum(rays_of(cubic_dual).values()) == 10


def test_tangential_needs_a_space_curve(cubic):
    with pytest.raises(HypothesisError):
        tangential_complex(cubic)


def test_dual_of_a_line_is_rejected():
    line = intersect_curve(fixture("line").supports())
    with pytest.raises(HypothesisError):
        dual_complex(line)


# -- tropical lines -------------------------------------------------------------

def test_line_through_one_vertex():
    line = plucker_to_line((0, 0, 0, 0, 0, 0), 3)
    assert line.vertices == [(0, 0, 0)]
    assert sorted(d for _, d, _ in line.rays()) == [(-1, -1, -1), (0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert line.segments() == []


def test_line_with_a_bounded_segment():
    line = plucker_to_line((0, 0, 1, 1, 0, 0), 3)
    assert line.vertices == [(-1, -1, 0), (1, 1, 0)]
    starts = {d: p for p, d, _ in line.rays()}
    assert starts[(-1, -1, -1)] == starts[(0, 0, 1)] == (-1, -1, 0)
    assert starts[(1, 0, 0)] == starts[(0, 1, 0)] == (1, 1, 0)


def test_plane_line():
    line = plucker_to_line((0, 1, 2), 2)
    assert line.vertices == [(1, 2)]


def test_line_input_errors():
    with pytest.raises(InputError):
        plucker_to_line((0, 1, 1, 1, 1, 0), 3)
    with pytest.raises(InputError):
        plucker_to_line((0, 0, 0), 3)


def _unit(i, n):
    return tuple(-1 for _ in range(n)) if i == 0 else tuple(int(k == i - 1) for k in range(n))


@st.composite
def tree_metrics(draw):
    """Tropical Plücker vectors of lines in 3-space: negated four-leaf tree
    metrics with rational edge lengths."""
    length = st.fractions(min_value=0, max_value=6, max_denominator=4)
    leaves = [draw(length) for _ in range(4)]
    inner = draw(length)
    a = draw(st.sampled_from([1, 2, 3]))
    side = {0, a}
    beta = []
    for i, j in itertools.combinations(range(4), 2):
        split = (i in side) != (j in side)
        beta.append(-(leaves[i] + leaves[j] + (inner if split else 0)))
    return tuple(beta)


@PROPERTY
@given(tree_metrics())
def test_line_rays_agree_with_closed_form(beta):
    line = plucker_to_line(beta, 3)
    assert line.complex.is_balanced()
    starts = {}
    for p, d, w in line.rays():
        assert w == 1
        starts[d] = p
    assert len(starts) == 4
    for i in range(4):
        assert starts[_unit(i, 3)] == dehomogenize(line.ray_vertices[i])


# -- fast paths -----------------------------------------------------------------

def test_tame_vertex_multiplicities(space_curve):
    assert tame_vertex_mult(normalize_cell(space_curve, "V0")) == 5
    assert tame_vertex_mult(normalize_cell(space_curve, "V2")) == 3
    with pytest.raises(NotApplicable):
        tame_vertex_mult(normalize_cell(space_curve, "V1"))
    with pytest.raises(NotApplicable):
        tame_vertex_mult(normalize_cell(space_curve, "E0"))


def test_tame_vertex_dual_lies_in_the_dual(space_curve, space_dual):
    part = tame_vertex_dual(space_curve, "V0")
    for poly, w in part.cells:
        assert w == 5
        inner = poly.points[0]
        probe = tuple(x + sum(r[k] for r in poly.rays) for k, x in enumerate(inner))
        assert space_dual.support_contains(probe)


@pytest.mark.parametrize("label", ["E0", "E1", "E2", "E6"])
@pytest.mark.parametrize("kind", ["dual", "tangential"])
def test_bergman_edges(space_curve, space_graph, label, kind):
    fast = bergman_edge(space_curve, label, kind)
    assert fast.equivalent(contribution(space_curve, space_graph, label, kind))


def test_bergman_needs_nonzero_minors(space_curve):
    with pytest.raises(NotApplicable):
        bergman_edge(space_curve, "E3")


# -- properties -------------------------------------------------------------------

def _split(graph, index, fraction):
    cell = graph.cells[index]
    t = fraction * (3 if is_inf(cell.length) else cell.length)
    left, right = cell.split(t)
    cells = graph.cells[:index] + [left, right] + graph.cells[index + 1:]
    return GaussGraph(graph.n, graph.pairs, graph.vanishing, cells, graph.families)


@PROPERTY
@given(st.data())
def test_cubic_dual_ignores_graph_subdivision(cubic, cubic_graph, cubic_dual, data):
    index = data.draw(st.integers(0, len(cubic_graph.cells) - 1))
    fraction = data.draw(st.fractions(min_value=0, max_value=1, max_denominator=9)
                         .filter(lambda f: 0 < f < 1))
    split = _split(cubic_graph, index, fraction)
    assert dual_complex(cubic, split).equivalent(cubic_dual)
    assert gauss_complex(cubic, split).equivalent(gauss_complex(cubic, cubic_graph))


@settings(max_examples=10, deadline=None)
@given(st.data())
def test_space_outputs_ignore_graph_subdivision(space_curve, space_graph, space_tau, data):
    bounded = [k for k, c in enumerate(space_graph.cells) if not is_inf(c.length)]
    index = data.draw(st.sampled_from(bounded))
    fraction = data.draw(st.fractions(min_value=0, max_value=1, max_denominator=9)
                         .filter(lambda f: 0 < f < 1))
    split = _split(space_graph, index, fraction)
    assert tangential_complex(space_curve, split).equivalent(space_tau)


@st.composite
def plane_supports(draw):
    out = []
    for _ in range(1):
        size = draw(st.integers(3, 6))
        exps = draw(st.lists(st.lists(st.integers(0, 3), min_size=2, max_size=2)
                             .filter(lambda e: sum(e) <= 3),
                             min_size=size, max_size=size, unique_by=tuple))
        vals = st.fractions(min_value=-6, max_value=6, max_denominator=5)
        out.append(ValuedSupport.from_homogeneous(
            {tuple(e) + (3 - sum(e),): draw(vals) for e in exps}))
    return out


@PROPERTY
@given(plane_supports())
def test_random_plane_curves_give_balanced_images(supports):
    try:
        curve = intersect_curve(supports)
        graph = graph_complex(curve)
        image = gauss_complex(curve, graph)
        dual = dual_complex(curve, graph)
    except (AssumptionError, HypothesisError):
        reject()
    assert image.is_balanced()
    assert dual.is_balanced()
    for fam in graph.families.values():
        for beta in fam.vectors():
            assert sum(1 for b in beta if is_inf(b)) == len(graph.vanishing)
