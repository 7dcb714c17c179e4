"""``basiclab`` command line.

Exit codes: 0 success, 1 a valid negative answer (not an array, infeasible,
no bolt found, ...), 2 invalid input, 3 search budget or solver failure.
JSON goes to stdout; diagnostics go to stderr as a single line.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import arrays, combinatorics, decompose, nonbasic, svg
from .core import GridShape, PointSet, adjacent_pairs, lex_rank
from .errors import BasicLabError, BudgetExceeded, InvalidInput, SolverError

EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID, EXIT_FAILURE = 0, 1, 2, 3
DEFAULT_BUDGET = 10**6


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _clean(obj):
    """Integral floats become ints so JSON stays short; everything else round-trips via repr."""
    if isinstance(obj, float) and math.isfinite(obj) and obj.is_integer() and abs(obj) < 2**53:
        return int(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(_clean(obj)) + "\n")


def _load(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc
    except OSError as exc:
        raise InvalidInput(f"{path}: {exc.strerror}") from exc


def _budget(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("BASICLAB_BUDGET")
    if env is None:
        return DEFAULT_BUDGET
    try:
        return int(env)
    except ValueError as exc:
        raise InvalidInput(f"BASICLAB_BUDGET={env!r} is not an integer") from exc


def _load_values(path: str) -> list[float]:
    obj = _load(path)
    if isinstance(obj, dict):
        obj = obj.get("values")
    if not isinstance(obj, list):
        raise InvalidInput('values file must be a JSON list or {"values": [...]}')
    try:
        return [float(v) for v in obj]
    except (TypeError, ValueError) as exc:
        raise InvalidInput("values must be numbers") from exc


# --- subcommands ----------------------------------------------------------


def cmd_validate_array(args) -> int:
    shape, points = arrays.array_candidate_from_json(_load(args.file))
    report = arrays.validate_array(shape, points, args.tolerance)
    _emit(report.to_json())
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_gen_array(args) -> int:
    if args.kind == "zigzag":
        if args.n != 1:
            raise InvalidInput("zigzag arrays live in the plane; use --n 1")
        if args.m is None:
            raise InvalidInput("zigzag needs --m")
        arr = arrays.gen_plane_zigzag(args.m)
    elif args.kind == "hypercube":
        if args.m not in (None, 4):
            raise InvalidInput("hypercube arrays have size 4")
        arr = arrays.gen_hypercube(args.n)
    else:
        if args.m is None:
            raise InvalidInput("product needs --m")
        z = arrays.gen_plane_zigzag(args.m)
        offsets = [(t * args.offset, t * args.offset) for t in range(args.n)]
        arr = arrays.gen_product([z] * args.n, offsets)
    _emit(arr.to_json())
    return EXIT_OK


def cmd_detect(args) -> int:
    X = PointSet.from_json(_load(args.points))
    if args.tolerance is not None:
        X = PointSet(X.dim, X.points, args.tolerance)
    budget = _budget(args.budget)
    if args.target == "bolt":
        mode = arrays.ALL_DISTINCT if args.mode == "distinct" else arrays.CONSECUTIVE_DISTINCT
        bolt = arrays.detect_plane_bolt(X, args.size, mode, budget, args.first_move)
        _emit({"found": bolt is not None, "bolt": None if bolt is None else bolt.to_json()})
        return EXIT_OK if bolt is not None else EXIT_NEGATIVE
    if X.dim % 2:
        raise InvalidInput("grid detection needs an even-dimensional point set")
    n = args.n if args.n is not None else X.dim // 2
    arr = arrays.detect_grid_array(X, GridShape(n, args.size), budget)
    _emit({"found": arr is not None, "array": None if arr is None else arr.to_json()})
    return EXIT_OK if arr is not None else EXIT_NEGATIVE


def cmd_e_iterate(args) -> int:
    trace = decompose.e_iterate(PointSet.from_json(_load(args.points)))
    _emit(trace.to_json())
    return EXIT_OK if trace.empties else EXIT_NEGATIVE


def cmd_decompose(args) -> int:
    X = PointSet.from_json(_load(args.points))
    f = _load_values(args.values)
    if args.objective == "exact":
        family = decompose.solve_exact(X, f)
        if family is None:
            _emit({"status": "infeasible"})
            return EXIT_NEGATIVE
        _emit(dict(status="feasible", **family.to_json()))
        return EXIT_OK
    outcome = decompose.min_supnorm(X, f)
    _emit(outcome.to_json())
    return EXIT_OK if outcome.optimal else EXIT_NEGATIVE


def cmd_lemma_check(args) -> int:
    inst = combinatorics.LemmaInstance.from_json(_load(args.instance))
    check = combinatorics.check_conditions(inst, args.tau)
    if not check.ok:
        _emit({
            "conditions_ok": {"adjacency_zero": check.adjacency_zero, "half_far": check.half_far},
            "violation": check.first_violation,
            "witness": None,
        })
        return EXIT_NEGATIVE
    _emit(combinatorics.lemma_witness(inst, args.tau).to_json())
    return EXIT_OK


def cmd_blowup(args) -> int:
    max_points = None if args.slow else nonbasic.DEFAULT_MAX_POINTS
    report = nonbasic.blowup_experiment(args.n, args.stages, args.seed, max_points)
    if args.figure:
        from .figures import blowup_figure

        blowup_figure(report, args.figure)
    _emit(report.to_json())
    return EXIT_OK


def _plot_geometry(obj):
    if isinstance(obj, dict) and "points_lex" in obj:
        arr = arrays.SternfeldArray.from_json(obj)
        pts = [p[:2] for p in arr.points]
        edges = [(lex_rank(i, arr.shape), lex_rank(j, arr.shape)) for i, j, _ in adjacent_pairs(arr.shape)]
        title = f"Sternfeld array of size {arr.m}" + (" in the plane" if arr.n == 1 else f" (n={arr.n}, axes 1-2)")
        return pts, edges, title
    if isinstance(obj, dict) and "points" in obj and "mode" in obj:
        bolt = arrays.PlaneBolt.from_json(obj)
        pts = list(bolt.points)
        return pts, [(r, r + 1) for r in range(len(pts) - 1)], f"Bolt of length {len(pts)} ({bolt.mode})"
    raise InvalidInput("plot needs array JSON (points_lex) or bolt JSON (mode, points)")


def cmd_plot(args) -> int:
    pts, edges, title = _plot_geometry(_load(args.file))
    text = svg.render(pts, edges, title)
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise InvalidInput(f"{args.out}: {exc.strerror}") from exc
    _emit({"out": args.out, "points": len(pts), "edges": len(edges)})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="basiclab", description="Sternfeld arrays, basic decompositions and the norm blow-up.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("validate-array", help="check an array JSON file")
    q.add_argument("file")
    q.add_argument("--tolerance", type=float, default=None)
    q.set_defaults(func=cmd_validate_array)

    q = sub.add_parser("gen-array", help="emit a generated array")
    q.add_argument("--kind", choices=("zigzag", "hypercube", "product"), required=True)
    q.add_argument("--m", type=int)
    q.add_argument("--n", type=int, default=1)
    q.add_argument("--offset", type=float, default=0.0, help="product: factor t shifted by t*offset")
    q.set_defaults(func=cmd_gen_array)

    q = sub.add_parser("detect", help="search a point set for a bolt or grid array")
    q.add_argument("points")
    q.add_argument("--target", choices=("bolt", "grid"), required=True)
    q.add_argument("--size", type=int, required=True)
    q.add_argument("--mode", choices=("distinct", "consecutive"), default="distinct")
    q.add_argument("--first-move", choices=("vertical", "any"), default="vertical")
    q.add_argument("--budget", type=int, default=None)
    q.add_argument("--n", type=int, default=None)
    q.add_argument("--tolerance", type=float, default=None)
    q.set_defaults(func=cmd_detect)

    q = sub.add_parser("e-iterate", help="iterate the E-operator")
    q.add_argument("points")
    q.set_defaults(func=cmd_e_iterate)

    q = sub.add_parser("decompose", help="decompose values on a point set")
    q.add_argument("points")
    q.add_argument("values")
    q.add_argument("--objective", choices=("exact", "minimax"), default="minimax")
    q.set_defaults(func=cmd_decompose)

    q = sub.add_parser("lemma-check", help="check a lemma instance and emit its certificate")
    q.add_argument("instance")
    q.add_argument("--tau", type=float, default=combinatorics.DEFAULT_TAU)
    q.set_defaults(func=cmd_lemma_check)

    q = sub.add_parser("blowup", help="run the norm blow-up experiment")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--stages", type=int, required=True)
    q.add_argument("--seed", type=int, default=None)
    q.add_argument("--slow", action="store_true", help="lift the ground-set size cap")
    q.add_argument("--figure", default=None, help="also save a matplotlib figure (png/pdf/svg)")
    q.set_defaults(func=cmd_blowup)

    q = sub.add_parser("plot", help="draw a plane array or bolt as SVG")
    q.add_argument("file", nargs="?", default="-")
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"basiclab: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (BudgetExceeded, SolverError) as exc:
        print(f"basiclab: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (BasicLabError, ValueError) as exc:
        print(f"basiclab: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
