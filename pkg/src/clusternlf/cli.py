"""Command-line interface.

Exit codes::

    0  success
    1  a violation or falsification event was recorded
    2  usage error
    3  matrix is not skew-symmetrizable
    4  enumeration budget exceeded (graph incomplete)
    5  inexact Laurent division (internal error)
    6  mutation direction out of range
    7  invalid input (bad JSON, unknown variable, not a face)
    8  sign-coherence violated
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from clusternlf.audit import full_audit
from clusternlf.bongartz import CompletionQuery, bongartz_completion, projection
from clusternlf.errors import (
    BudgetExceeded,
    DirectionOutOfRange,
    DivisionNotExact,
    FalsificationEvent,
    NotAFace,
    NotSkewSymmetrizable,
    SignCoherenceViolated,
)
from clusternlf.graph import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_MAX_VERTICES,
    ExchangeGraph,
    enumerate_graph,
    to_dot,
)
from clusternlf.laurent import LaurentPoly
from clusternlf.nlf import DEFAULT_PAIR_BUDGET, DEFAULT_PATH_BUDGET
from clusternlf.seed import ExchangeMatrix, cmatrix, initial_seed, reduce_word, replay

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_NOT_SKEW = 3
EXIT_BUDGET = 4
EXIT_DIVISION = 5
EXIT_DIRECTION = 6
EXIT_INPUT = 7
EXIT_SIGN = 8

PRESETS = {
    "A2": [[0, 1], [-1, 0]],
    "B2": [[0, 1], [-2, 0]],
    "C2": [[0, 2], [-1, 0]],
    "G2": [[0, 1], [-3, 0]],
    "A3": [[0, 1, 0], [-1, 0, 1], [0, -1, 0]],
    "B3": [[0, 1, 0], [-1, 0, 1], [0, -2, 0]],
    "A4": [[0, 1, 0, 0], [-1, 0, 1, 0], [0, -1, 0, 1], [0, 0, -1, 0]],
    "D4": [[0, 1, 0, 0], [-1, 0, 1, 1], [0, -1, 0, 0], [0, -1, 0, 0]],
    "markov": [[0, 2, -2], [-2, 0, 2], [2, -2, 0]],
}

log = logging.getLogger("clusternlf")


class InputError(Exception):
    pass


def _load_input(source: str) -> dict:
    if source in PRESETS:
        return {"B": PRESETS[source]}
    path = Path(source)
    try:
        text = path.read_text() if path.exists() else source
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read input {source!r}: {exc}") from exc
    if isinstance(data, list):
        data = {"B": data}
    if not isinstance(data, dict) or "B" not in data:
        raise InputError("input must be a JSON object with key 'B'")
    return data


def _matrix(data: dict) -> ExchangeMatrix:
    return ExchangeMatrix.from_rows(data["B"], data.get("symmetrizer"))


def _graph(args, data: dict) -> ExchangeGraph:
    if "vertices" in data:
        return ExchangeGraph.from_json(data)
    return enumerate_graph(
        initial_seed(_matrix(data)),
        max_vertices=args.max_vertices,
        max_depth=args.max_depth,
        workers=args.workers,
    )


def _complete_graph(args, data: dict) -> ExchangeGraph:
    g = _graph(args, data)
    if not g.complete:
        raise BudgetExceeded(
            f"enumeration incomplete after {len(g)} vertices; raise --max-vertices/--max-depth"
        )
    return g


def _word(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        steps = [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise InputError(f"bad path {text!r}") from exc
    return tuple(steps)


def _variables(g: ExchangeGraph, specs: list[str] | None) -> frozenset[LaurentPoly]:
    out = set()
    for spec in specs or []:
        for text in spec.split(";"):
            if not text.strip():
                continue
            try:
                x = LaurentPoly.parse(text, g.n)
            except ValueError as exc:
                raise InputError(str(exc)) from exc
            if str(x) not in g.registry:
                raise InputError(f"{text!r} is not a cluster variable of this graph")
            out.add(x)
    return frozenset(out)


def _emit(args, payload: str) -> None:
    if args.output:
        Path(args.output).write_text(payload)
    else:
        sys.stdout.write(payload)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _matrix_text(rows) -> str:
    return "\n".join("  [" + ", ".join(f"{v:>3}" for v in r) + "]" for r in rows)


# -- verbs ------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    g = _graph(args, _load_input(args.input))
    summary = f"{len(g)} vertices, {len(g.edges)} edges, {'complete' if g.complete else 'incomplete'}"
    if args.format == "dot":
        payload = to_dot(g)
    elif args.format == "text":
        lines = [summary]
        for i, c in enumerate(g.vertices):
            lines.append(f"{i}: {{{', '.join(c.strings())}}} via {list(g.witness(i))}")
        payload = "\n".join(lines) + "\n"
    else:
        payload = _dump(g.to_json())
    _emit(args, payload)
    if args.format != "text":
        print(summary, file=sys.stdout if args.output else sys.stderr)
    return EXIT_OK if g.complete else EXIT_BUDGET


def cmd_mutate(args) -> int:
    seed = replay(initial_seed(_matrix(_load_input(args.input))), _word(args.path))
    if args.format == "text":
        payload = (
            "variables:\n"
            + "".join(f"  {i}: {x}\n" for i, x in enumerate(seed.variables, start=1))
            + f"B:\n{_matrix_text(seed.matrix.entries)}\nC:\n{_matrix_text(seed.cmatrix.rows)}\n"
            + f"path: {list(seed.path)}\n"
        )
    else:
        payload = _dump(seed.to_json())
    _emit(args, payload)
    return EXIT_OK


def cmd_cvectors(args) -> int:
    data = _load_input(args.input)
    root = reduce_word(_word(args.root))
    if args.path is not None:
        B0 = _matrix(data)
        targets = [(None, reduce_word(_word(args.path)))]
    else:
        g = _complete_graph(args, data)
        B0 = g.matrix
        targets = [(v, g.witness(v)) for v in range(len(g))]
    records = []
    for v, word in targets:
        C = cmatrix(B0, root, word)
        rec = {"target_path": list(word), "C": C.tolist(), "det": C.det(), "sign_coherent": C.is_sign_coherent()}
        if v is not None:
            rec = {"vertex": v, **rec}
        records.append(rec)
    if args.format == "text":
        payload = "".join(
            f"target {r['target_path']}: det={r['det']} sign-coherent={r['sign_coherent']}\n"
            f"{_matrix_text(r['C'])}\n"
            for r in records
        )
    else:
        payload = _dump({"root_path": list(root), "cmatrices": records})
    _emit(args, payload)
    bad = any(not r["sign_coherent"] or abs(r["det"]) != 1 for r in records)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_bongartz(args) -> int:
    g = _complete_graph(args, _load_input(args.input))
    q = CompletionQuery(_variables(g, args.U), reduce_word(_word(args.root)))
    try:
        res = bongartz_completion(g, q)
    except FalsificationEvent as exc:
        _emit(args, _dump({"U": sorted(map(str, q.U)), "root_path": list(q.root), "error": str(exc)}))
        return EXIT_VIOLATION
    rec = res.to_json(q)
    if args.format == "text":
        payload = f"B_U = {{{', '.join(rec['completion'])}}} (vertex {res.vertex})\n" + "".join(
            f"  position {c['position']}: c = {c['c_vector']}\n" for c in rec["certificate"]
        )
    else:
        payload = _dump(rec)
    _emit(args, payload)
    return EXIT_OK


def cmd_project(args) -> int:
    g = _complete_graph(args, _load_input(args.input))
    P = projection(g, _variables(g, args.U))
    if args.format == "text":
        payload = "".join(
            f"{v} -> {p}{'  (in face)' if v in P.face else ''}\n" for v, p in enumerate(P.image)
        ) + f"violations: {len(P.violations)}\n"
    else:
        payload = _dump(P.to_json())
    _emit(args, payload)
    return EXIT_OK if P.ok else EXIT_VIOLATION


def cmd_verify(args) -> int:
    g = _complete_graph(args, _load_input(args.input))
    audit = full_audit(g, args.pair_budget, args.path_budget, args.workers)
    if args.format == "text":
        _emit(args, audit.summary() + "\n")
    else:
        _emit(args, _dump(audit.to_json()))
        print(audit.summary(), file=sys.stdout if args.output else sys.stderr)
    return EXIT_OK if audit.ok else EXIT_VIOLATION


def cmd_export_dot(args) -> int:
    g = _graph(args, _load_input(args.input))
    U = _variables(g, args.U) if args.U else None
    _emit(args, to_dot(g, U))
    return EXIT_OK if g.complete else EXIT_BUDGET


VERBS = {
    "enumerate": (cmd_enumerate, "enumerate the exchange graph"),
    "mutate": (cmd_mutate, "apply a mutation path to the initial seed"),
    "cvectors": (cmd_cvectors, "C-matrices relative to a root tree vertex"),
    "bongartz": (cmd_bongartz, "Bongartz completion of U w.r.t. a root"),
    "project": (cmd_project, "face projection P_U with axiom audit"),
    "verify-nlf": (cmd_verify, "verify the non-leaving-face property"),
    "export-dot": (cmd_export_dot, "write the graph in DOT format"),
}


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", required=True, help="JSON file, inline JSON, or preset name")
    common.add_argument("--output", "-o", help="write output here instead of stdout")
    common.add_argument("--format", "-f", choices=["json", "dot", "text"], default="json")
    common.add_argument("--max-vertices", type=_positive, default=DEFAULT_MAX_VERTICES)
    common.add_argument("--max-depth", type=_positive, default=DEFAULT_MAX_DEPTH)
    common.add_argument("--pair-budget", type=_positive, default=DEFAULT_PAIR_BUDGET)
    common.add_argument("--path-budget", type=_positive, default=DEFAULT_PATH_BUDGET)
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--verbose", "-v", action="store_true")

    parser = argparse.ArgumentParser(
        prog="clusternlf",
        description="Exchange graphs, c-vectors, Bongartz completions and the non-leaving-face property.",
        epilog="presets: " + ", ".join(PRESETS),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (func, help_) in VERBS.items():
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        if name in ("mutate", "cvectors"):
            p.add_argument("--path", help="mutation directions, e.g. '1,2,1'")
        if name in ("cvectors", "bongartz"):
            p.add_argument("--root", default="", help="tree vertex of the reference root")
        if name in ("bongartz", "project", "export-dot"):
            p.add_argument(
                "--U", action="append", required=name != "export-dot",
                help="cluster variables, ';'-separated or repeated",
            )
    return parser


ERROR_CODES = [
    (NotSkewSymmetrizable, EXIT_NOT_SKEW),
    (BudgetExceeded, EXIT_BUDGET),
    (DivisionNotExact, EXIT_DIVISION),
    (DirectionOutOfRange, EXIT_DIRECTION),
    (SignCoherenceViolated, EXIT_SIGN),
    (FalsificationEvent, EXIT_VIOLATION),
    (NotAFace, EXIT_INPUT),
    (InputError, EXIT_INPUT),
]


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except tuple(e for e, _ in ERROR_CODES) as exc:
        code = next(c for e, c in ERROR_CODES if isinstance(exc, e))
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    except (ValueError, KeyError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
