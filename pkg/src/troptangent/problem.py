"""Problem files and the staged pipeline.

A problem is a JSON object ``{"n": 3, "hypersurfaces": [{"monomials":
[[...], ...], "valuations": ["0", "3/2", ...]}, ...]}``.  Monomials are
either projective (all of one positive total degree) or already of
degree zero.  Rationals are strings so nothing passes through floats.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .curve import (TropicalCurve, affine_span_dimension, check_balancing, degree,
                    intersect_curve, normalize_cell)
from .errors import InputError, TropTangentError
from .hypersurface import ValuedSupport, is_tropically_smooth
from .incidence import (dual_complex, gauss_complex, graph_complex, require_not_line,
                        require_not_planar, tangential_complex)
from .newton import newton_polytope
from .tangents import critical_locus

STAGES = ("curve", "tangents", "gauss", "dual", "tau", "newton")
FIXTURES = Path(__file__).with_name("fixtures")

_RATIONAL = re.compile(r"^\s*[+-]?\d+(/\d+)?\s*$")


class ParseError(InputError):
    code = "parse"


@dataclass(frozen=True)
class Hypersurface:
    monomials: tuple[tuple[int, ...], ...]
    valuations: tuple[Fraction, ...]

    def support(self) -> ValuedSupport:
        terms = list(zip(self.monomials, self.valuations))
        if all(sum(m) == 0 for m in self.monomials):
            return ValuedSupport.from_mapping(terms)
        return ValuedSupport.from_homogeneous(terms)


@dataclass(frozen=True)
class ProblemSpec:
    n: int
    hypersurfaces: tuple[Hypersurface, ...]

    def supports(self) -> list[ValuedSupport]:
        return [h.support() for h in self.hypersurfaces]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "hypersurfaces": [{
                "monomials": [list(m) for m in h.monomials],
                "valuations": [str(v) for v in h.valuations],
            } for h in self.hypersurfaces],
        }


def _rational(text, where) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ParseError(f"{where}: expected a rational string, got {text!r}")
    if isinstance(text, str) and not _RATIONAL.match(text):
        raise ParseError(f"{where}: {text!r} is not a rational number")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"{where}: zero denominator in {text!r}") from None


def problem_from_json(data) -> ProblemSpec:
    if not isinstance(data, dict):
        raise ParseError("top level: expected a JSON object")
    n = data.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ParseError(f"n: expected an integer >= 2, got {n!r}")
    hyps = data.get("hypersurfaces")
    if not isinstance(hyps, list) or not hyps:
        raise ParseError("hypersurfaces: expected a nonempty list")
    if len(hyps) != n - 1:
        raise ParseError(f"hypersurfaces: a curve in P^{n} needs {n - 1}, got {len(hyps)}")
    out = []
    for k, h in enumerate(hyps):
        where = f"hypersurfaces[{k}]"
        if not isinstance(h, dict):
            raise ParseError(f"{where}: expected an object")
        mons, vals = h.get("monomials"), h.get("valuations")
        if not isinstance(mons, list) or not isinstance(vals, list):
            raise ParseError(f"{where}: needs lists 'monomials' and 'valuations'")
        if len(mons) != len(vals):
            raise ParseError(f"{where}: {len(mons)} monomials but {len(vals)} valuations")
        if len(mons) < 2:
            raise ParseError(f"{where}: at least two terms are needed")
        monomials = []
        for j, m in enumerate(mons):
            if not isinstance(m, list) or len(m) != n + 1 or \
                    not all(isinstance(x, int) and not isinstance(x, bool) for x in m):
                raise ParseError(f"{where}.monomials[{j}]: expected {n + 1} integers")
            monomials.append(tuple(m))
        if len({sum(m) for m in monomials}) != 1:
            raise ParseError(f"{where}: monomials have different total degrees")
        if len(set(monomials)) != len(monomials):
            raise ParseError(f"{where}: repeated monomial")
        valuations = tuple(_rational(v, f"{where}.valuations[{j}]") for j, v in enumerate(vals))
        out.append(Hypersurface(tuple(monomials), valuations))
    return ProblemSpec(n, tuple(out))


def parse_problem_text(text: str) -> ProblemSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return problem_from_json(data)


def parse_problem(path) -> ProblemSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem_text(text)


def fixture(name: str) -> ProblemSpec:
    """Bundled example problems: ``p3_curve``, ``plane_cubic``, ``line``."""
    return parse_problem(FIXTURES / f"{name}.json")


def check_assumptions(curve: TropicalCurve) -> dict:
    """Runtime report on the standing hypotheses for a computed curve.

    Transversality and the three-term rule are enforced while the curve
    is built, so they hold whenever this report exists.
    """
    report = {
        "tropical_complete_intersection": {"holds": True},
        "three_term_condition": {"holds": True},
        "balanced": {"holds": check_balancing(curve)},
        "tropically_smooth": {"holds": all(is_tropically_smooth(s) for s in curve.supports)},
    }
    problems = []
    for k in range(len(curve.edges)):
        try:
            critical_locus(normalize_cell(curve, f"E{k}"))
        except TropTangentError as exc:
            problems.append(f"E{k}: {exc.message}")
    report["non_colliding"] = {"holds": not problems, "detail": problems}
    deg = degree(curve)
    report["not_a_line"] = {"holds": deg != 1}
    report["not_in_a_plane"] = {"holds": curve.n > 2 and affine_span_dimension(curve) == curve.n,
                                "detail": "checked on the span of the tropical curve"}
    return report


def run_stage(spec: ProblemSpec, stage: str):
    """JSON document for ``stage`` together with the drawable object
    (curve or weighted complex), which is ``None`` for tables."""
    if stage not in STAGES:
        raise InputError(f"unknown stage {stage!r}; expected one of {', '.join(STAGES)}")
    curve = intersect_curve(spec.supports())
    doc: dict = {"stage": stage, "n": spec.n}
    if stage == "curve":
        doc["curve"] = curve.to_json()
        doc["degree"] = str(degree(curve))
        doc["assumptions"] = check_assumptions(curve)
        return doc, curve
    if stage in ("gauss", "dual", "newton"):
        require_not_line(curve)
    if stage == "tau":
        require_not_planar(curve)
    graph = graph_complex(curve)
    if stage == "tangents":
        doc["families"] = {label: fam.to_json() for label, fam in graph.families.items()}
        doc["graph"] = graph.to_json()
        return doc, None
    if stage == "gauss":
        result = gauss_complex(curve, graph)
        doc["plucker_pairs"] = ["".join(map(str, p)) for p in graph.live_pairs]
    elif stage == "tau":
        result = tangential_complex(curve, graph)
    else:
        result = dual_complex(curve, graph)
    if stage == "newton":
        doc.update(newton_polytope(result).to_json())
        return doc, None
    doc["complex"] = result.to_json()
    doc["vertices"] = len(result.vertices())
    doc["bounded_cells"] = len(result.bounded())
    doc["unbounded_cells"] = len(result.unbounded())
    return doc, result


def run_pipeline(spec: ProblemSpec, stage: str) -> dict:
    """Run the pipeline up to ``stage`` and return its JSON document."""
    return run_stage(spec, stage)[0]


def render_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
