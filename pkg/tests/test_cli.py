import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from troptangent.cli import main
from troptangent.complexes import WeightedComplex
from troptangent.problem import (FIXTURES, ParseError, ProblemSpec, fixture, parse_problem,
                                 parse_problem_text, problem_from_json, render_document,
                                 run_pipeline)
from troptangent.svg import ProjectionError, curve_complex, render_projection


def _terms(support):
    return dict(support.terms)


# -- parsing ----------------------------------------------------------------------

def test_space_fixture_parses_to_laurent_terms():
    spec = fixture("p3_curve")
    assert spec.n == 3
    f1, f2 = spec.supports()
    assert _terms(f1) == {(0, 0, 0, 0): 0, (1, 0, 3, -4): 0, (2, 0, 1, -3): 0}
    assert _terms(f2) == {(0, 0, 0, 0): 0, (0, 1, 1, -2): 0, (1, -1, 0, 0): 3}
    assert spec.hypersurfaces[1].valuations[spec.hypersurfaces[1].monomials.index((1, 0, 0, 2))] == 3


def test_cubic_fixture():
    spec = fixture("plane_cubic")
    assert spec.n == 2
    assert len(spec.hypersurfaces) == 1
    assert spec.hypersurfaces[0].valuations == (0, 0, 0)


def test_rationals_are_exact():
    spec = parse_problem_text(json.dumps({
        "n": 2, "hypersurfaces": [{"monomials": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                                   "valuations": ["3", "9/8", "-2/3"]}]}))
    assert spec.hypersurfaces[0].valuations == (3, Fraction(9, 8), Fraction(-2, 3))


def _cubic_doc(**changes):
    doc = fixture("plane_cubic").to_json()
    doc["hypersurfaces"][0].update(changes)
    return doc


@pytest.mark.parametrize("doc, needle", [
    ({"n": 2, "hypersurfaces": []}, "nonempty"),
    ({"n": 3, "hypersurfaces": _cubic_doc()["hypersurfaces"]}, "needs 2"),
    ([], "JSON object"),
    ({"n": 1, "hypersurfaces": []}, "n:"),
    (_cubic_doc(valuations=["0", "0"]), "3 monomials but 2"),
    (_cubic_doc(valuations=["0", "0.5", "0"]), "not a rational"),
    (_cubic_doc(valuations=["0", 0.5, "0"]), "rational string"),
    (_cubic_doc(valuations=["0", "1/0", "0"]), "zero denominator"),
    (_cubic_doc(monomials=[[2, 1, 0], [2, 0, 1], [0, 2]]), "expected 3 integers"),
    (_cubic_doc(monomials=[[2, 1, 0], [2, 0, 1], [0, 2, 2]]), "total degrees"),
    (_cubic_doc(monomials=[[2, 1, 0], [2, 1, 0], [0, 2, 1]]), "repeated"),
    (_cubic_doc(monomials=[[2, 1, 0]], valuations=["0"]), "two terms"),
])
def test_parse_errors(doc, needle):
    with pytest.raises(ParseError, match=needle):
        problem_from_json(doc)


def test_malformed_json_reports_the_line():
    with pytest.raises(ParseError, match="line 2"):
        parse_problem_text('{"n": 2,\n "hypersurfaces": [}')


def test_missing_file(tmp_path):
    with pytest.raises(ParseError, match="cannot read"):
        parse_problem(tmp_path / "absent.json")


@pytest.mark.parametrize("name", ["p3_curve", "plane_cubic", "line"])
def test_fixture_round_trip(name):
    spec = fixture(name)
    assert problem_from_json(json.loads(json.dumps(spec.to_json()))) == spec


@st.composite
def problem_specs(draw):
    n = draw(st.integers(2, 4))
    hyps = []
    for _ in range(n - 1):
        d = draw(st.integers(1, 3))
        mons = draw(st.lists(st.lists(st.integers(0, d), min_size=n, max_size=n)
                             .filter(lambda m: sum(m) <= d)
                             .map(lambda m: m + [d - sum(m)]),
                             min_size=2, max_size=6, unique_by=tuple))
        vals = draw(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=30),
                             min_size=len(mons), max_size=len(mons)))
        hyps.append({"monomials": mons, "valuations": [str(v) for v in vals]})
    return {"n": n, "hypersurfaces": hyps}


@settings(max_examples=200, deadline=None)
@given(problem_specs())
def test_serialization_round_trip(doc):
    spec = problem_from_json(doc)
    assert isinstance(spec, ProblemSpec)
    again = parse_problem_text(render_document(spec.to_json()))
    assert again == spec
    assert again.to_json() == spec.to_json()


# -- pipeline documents ----------------------------------------------------------------

def test_cubic_curve_document():
    doc = run_pipeline(fixture("plane_cubic"), "curve")
    assert len(doc["curve"]["vertices"]) == 1
    assert sorted(e["multiplicity"] for e in doc["curve"]["edges"]) == [1, 1, 2]
    assert doc["degree"] == "3"


def test_newton_document():
    doc = run_pipeline(fixture("plane_cubic"), "newton")
    assert doc["degree"] == "4"
    assert doc["f_vector"] == [4, 4]
    assert doc["lattice_points"] == 13


def test_documents_are_deterministic():
    spec = fixture("plane_cubic")
    for stage in ("curve", "tangents", "gauss", "dual", "newton"):
        assert render_document(run_pipeline(spec, stage)) == \
            render_document(run_pipeline(fixture("plane_cubic"), stage))


# -- command line ----------------------------------------------------------------------

def _run(stage, name, tmp_path, *extra):
    out = tmp_path / f"{stage}.json"
    code = main([stage, "--input", str(FIXTURES / f"{name}.json"), "--output", str(out), *extra])
    return code, json.loads(out.read_text())


def test_cli_success(tmp_path):
    code, doc = _run("newton", "plane_cubic", tmp_path)
    assert code == 0
    assert doc["stage"] == "newton"


def test_cli_hypothesis_failures(tmp_path, capsys):
    code, doc = _run("tau", "plane_cubic", tmp_path)
    assert code == 2
    assert doc["error"]["code"] == "hypothesis"
    assert "not contained in a plane" in doc["error"]["message"]
    code, doc = _run("gauss", "line", tmp_path)
    assert code == 2
    assert "not a line" in doc["error"]["message"]
    assert "not a line" in capsys.readouterr().err


def test_cli_parse_failure(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "hypersurfaces": [{"monomials": [[1, 0, 0]], "valuations": ["x"]}]}')
    out = tmp_path / "out.json"
    assert main(["curve", "--input", str(bad), "--output", str(out)]) == 1
    assert json.loads(out.read_text())["error"]["code"] == "parse"


def test_cli_rejects_unknown_stage():
    with pytest.raises(SystemExit):
        main(["everything", "--input", "x.json"])


def test_cli_writes_to_stdout(capsys):
    assert main(["curve", "--input", str(FIXTURES / "plane_cubic.json")]) == 0
    assert json.loads(capsys.readouterr().out)["stage"] == "curve"


def test_cli_output_is_byte_identical(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        main(["dual", "--input", str(FIXTURES / "plane_cubic.json"), "--output", str(path)])
    assert a.read_bytes() == b.read_bytes()


def test_cli_cannot_draw_a_table(tmp_path):
    code, doc = _run("newton", "plane_cubic", tmp_path, "--svg", str(tmp_path / "x.svg"))
    assert code == 1
    assert "nothing to draw" in doc["error"]["message"]


# -- figures ---------------------------------------------------------------------------

def _count(svg, tag):
    return svg.count(f"<{tag} ")


def test_curve_figure(tmp_path):
    path = tmp_path / "curve.svg"
    code, _ = _run("curve", "p3_curve", tmp_path, "--svg", str(path), "--projection", "1,0,-1;0,1,0")
    assert code == 0
    svg = path.read_text()
    assert (_count(svg, "circle"), _count(svg, "line")) == (3, 7)


def test_gauss_figure_is_seeded(tmp_path):
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    for path in (first, second):
        code, _ = _run("gauss", "p3_curve", tmp_path, "--svg", str(path), "--seed", "3")
        assert code == 0
    svg = first.read_text()
    assert (_count(svg, "circle"), _count(svg, "line")) == (6, 25)
    assert svg == second.read_text()


def test_multiplicities_are_labelled(cubic):
    svg = render_projection(curve_complex(cubic), "1,0;0,1")
    assert _count(svg, "text") == 1
    assert ">2</text>" in svg


def test_empty_figure():
    svg = render_projection(WeightedComplex(3, []), "random-seeded")
    assert "<svg" in svg
    assert _count(svg, "circle") == _count(svg, "line") == 0


@pytest.mark.parametrize("matrix", ["1,0,0;2,0,0", "1,0;0,1", "1,2,x;0,1,0"])
def test_degenerate_projections(space_curve, matrix):
    with pytest.raises(ProjectionError):
        render_projection(curve_complex(space_curve), matrix)
