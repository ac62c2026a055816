"""Command-line entry points: infer, induce, generate, stats, corpus, serve."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import write_corpus
from .enclosure import enforce
from .errors import VoxgramError
from .grammar import grammar_to_doc, induce, load_grammar
from .inference import (
    InferenceParams,
    SearchOps,
    hill_climb,
    load_shape_set,
    shape_set_to_doc,
)
from .metrics import rows_to_csv, run_grid
from .model import load_model, model_to_doc
from .production import generate, production_to_doc, to_model
from .shapes import ShapeSpec


def _nonnegative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _spec(text: str) -> ShapeSpec:
    try:
        return ShapeSpec(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown spec {text!r} (use rect, 2d, or 3d)") from None


def _ops(text: str) -> SearchOps:
    try:
        return SearchOps(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown ops {text!r} (use merge, split, or both)") from None


def _comma_list(parse_one):
    def parse(text: str):
        return [parse_one(part) for part in text.split(",") if part]

    return parse


def _bool_list(text: str) -> list[bool]:
    out = []
    for part in text.split(","):
        if part == "true":
            out.append(True)
        elif part == "false":
            out.append(False)
        elif part:
            raise argparse.ArgumentTypeError(f"expected true/false, got {part!r}")
    return out


def _write(path: str, text: str) -> None:
    Path(path).write_text(text if text.endswith("\n") else text + "\n")


def _json(doc) -> str:
    return json.dumps(doc, indent=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voxgram",
        description="Learn a rewrite grammar from voxel buildings and generate new ones.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_infer = sub.add_parser("infer", help="infer a shape set from a voxel model")
    p_infer.add_argument("model", help="Voxel JSON file")
    p_infer.add_argument("--spec", type=_spec, default=ShapeSpec.RECTANGULAR)
    p_infer.add_argument("--alpha", type=_nonnegative_float, default=1.0)
    p_infer.add_argument("--ops", type=_ops, default=SearchOps.MERGE)
    p_infer.add_argument("--overlap", action="store_true")
    p_infer.add_argument("--plateau", action=argparse.BooleanOptionalAction, default=True)
    p_infer.add_argument("--max-steps", type=_positive_int, default=None)
    p_infer.add_argument("-o", "--output", required=True)

    p_induce = sub.add_parser("induce", help="induce a grammar from shape sets")
    p_induce.add_argument("sets", nargs="+", help="shape-set JSON files")
    p_induce.add_argument("--initial", type=int, default=None)
    p_induce.add_argument("-o", "--output", required=True)

    p_gen = sub.add_parser("generate", help="generate a model from a grammar")
    p_gen.add_argument("grammar", help="grammar JSON file")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--max-steps", type=_positive_int, default=20)
    p_gen.add_argument("--initial", type=int, default=None)
    p_gen.add_argument("--enclosure", action="store_true")
    p_gen.add_argument("--production", help="also write the production JSON here")
    p_gen.add_argument("-o", "--output", required=True)

    p_stats = sub.add_parser("stats", help="run the parameter grid over a corpus directory")
    p_stats.add_argument("corpus", help="directory of Voxel JSON files")
    p_stats.add_argument("--specs", type=_comma_list(_spec), default=[ShapeSpec.RECTANGULAR])
    p_stats.add_argument("--alphas", type=_comma_list(_nonnegative_float), default=[1.0])
    p_stats.add_argument("--ops", type=_comma_list(_ops), default=[SearchOps.MERGE])
    p_stats.add_argument("--overlaps", type=_bool_list, default=[False])
    p_stats.add_argument("--plateau", action=argparse.BooleanOptionalAction, default=True)
    p_stats.add_argument("-o", "--output", required=True)

    p_corpus = sub.add_parser("corpus", help="write the bundled example corpus")
    p_corpus.add_argument("-o", "--output", required=True, help="target directory")

    p_serve = sub.add_parser("serve", help="serve the co-creative HTTP API")
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--corpus", default=None, help="directory of Voxel JSON files to expose")
    return parser


def _cmd_infer(args) -> int:
    model = load_model(Path(args.model).read_text(), as_example=True)
    params = InferenceParams(
        spec=args.spec,
        alpha=args.alpha,
        ops=args.ops,
        overlap=args.overlap,
        plateau_merges=args.plateau,
        max_steps=args.max_steps,
    )
    shape_set = hill_climb(model, params)
    _write(args.output, _json(shape_set_to_doc(shape_set)))
    print(f"wrote {len(shape_set.shapes)} shapes to {args.output}", file=sys.stderr)
    return 0


def _cmd_induce(args) -> int:
    sets = []
    for path in args.sets:
        sets.append(load_shape_set(Path(path).read_text()))
    g = induce(sets, initial=args.initial)
    _write(args.output, _json(grammar_to_doc(g)))
    print(
        f"wrote grammar with {len(g.shapes)} shapes, {len(g.rules)} rules, "
        f"{len(g.classes)} classes to {args.output}",
        file=sys.stderr,
    )
    return 0


def _cmd_generate(args) -> int:
    g = load_grammar(Path(args.grammar).read_text())
    p = generate(g, seed=args.seed, max_steps=args.max_steps, initial=args.initial)
    removed = 0
    if args.enclosure:
        kept = enforce(p)
        removed = len(p.placed) - len(kept.placed)
        p = kept
    model = to_model(p)
    _write(args.output, _json(model_to_doc(model)))
    if args.production:
        _write(args.production, _json(production_to_doc(p)))
    note = f", enclosure removed {removed} shapes" if args.enclosure else ""
    print(
        f"seed {p.seed}: placed {len(p.placed)} shapes, {len(model)} blocks{note}",
        file=sys.stderr,
    )
    return 0


def _cmd_stats(args) -> int:
    corpus_dir = Path(args.corpus)
    paths = sorted(corpus_dir.glob("*.json"))
    if not paths:
        raise VoxgramError(f"no .json models found in {corpus_dir}")
    models = [load_model(path.read_text(), as_example=True) for path in paths]
    rows = run_grid(models, args.specs, args.alphas, args.ops, args.overlaps, args.plateau)
    _write(args.output, rows_to_csv(rows))
    print(f"wrote {len(rows)} rows to {args.output}", file=sys.stderr)
    return 0


def _cmd_corpus(args) -> int:
    paths = write_corpus(args.output)
    print(f"wrote {len(paths)} models to {args.output}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import os

    import uvicorn

    from .api import create_app

    port = args.port if args.port is not None else int(os.environ.get("VOXGRAM_PORT", "8571"))
    app = create_app(corpus_dir=args.corpus)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


_COMMANDS = {
    "infer": _cmd_infer,
    "induce": _cmd_induce,
    "generate": _cmd_generate,
    "stats": _cmd_stats,
    "corpus": _cmd_corpus,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except VoxgramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
