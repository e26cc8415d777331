"""Command line driver: ``troptangent <stage> --input problem.json``."""

from __future__ import annotations

import argparse
import sys

from .errors import AssumptionError, HypothesisError, TropTangentError
from .problem import STAGES, parse_problem, render_document, run_stage
from .svg import render_projection


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="troptangent",
        description="Tropical tangents, Gauss images, dual and tangential varieties of space curves.")
    parser.add_argument("stage", choices=STAGES)
    parser.add_argument("--input", required=True, help="problem file (JSON)")
    parser.add_argument("--output", help="write the JSON document here instead of stdout")
    parser.add_argument("--svg", help="also draw the result (curve, gauss, dual, tau)")
    parser.add_argument("--projection", default="random-seeded",
                        help='2 x n matrix "a,b,c;d,e,f", or random-seeded (default)')
    parser.add_argument("--seed", type=int, default=0, help="seed for the random projection")
    return parser


def _emit(text: str, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = parse_problem(args.input)
        doc, drawable = run_stage(spec, args.stage)
        if args.svg:
            if drawable is None:
                raise TropTangentError(f"stage {args.stage} has nothing to draw")
            render_projection(drawable, args.projection, args.svg, seed=args.seed)
    except TropTangentError as exc:
        _emit(render_document(exc.to_json()), args.output)
        print(f"troptangent: {exc.message}", file=sys.stderr)
        return 2 if isinstance(exc, (HypothesisError, AssumptionError)) else 1
    _emit(render_document(doc), args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
