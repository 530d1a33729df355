"""Command-line interface.

Exit status is 0 on success, 1 when a check or verification fails and 2 on
usage or input errors.  Terms, types and JSON documents may be given inline
or as a file path; an argument starting with ``(``, ``{`` or ``[``, or one
naming no existing file, is taken inline, and ``-`` reads standard input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import bifun, biorder, corpus, games, lam, omega, spcf
from .biorder import Element
from .errors import BistableError
from .suites import DEFAULT_SEED, SUITES, run_suite
from .syntax import parse_term, parse_type, show


class Usage(Exception):
    pass


def read_input(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    s = arg.lstrip()
    if s[:1] in "({[" or not os.path.isfile(arg):
        return arg
    with open(arg, encoding="utf-8") as fh:
        return fh.read()


def read_json(arg: str):
    try:
        return json.loads(read_input(arg))
    except json.JSONDecodeError as exc:
        raise BistableError("bad-json", str(exc)) from None


def emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, ensure_ascii=False, sort_keys=True))
    else:
        print(text)


# ------------------------------------------------------------------ commands


def cmd_eval(args) -> int:
    M = corpus.expand(parse_term(read_input(args.term), "spcf"))
    r = spcf.run(M, args.fuel, trace=args.trace)
    o = r.outcome
    data = {"outcome": type(o).__name__, "kind": o.kind, "steps": o.steps}
    if args.trace:
        data["trace"] = r.trace
    lines = r.trace + [f"{type(o).__name__} after {o.steps} steps"] if args.trace else \
        [f"{type(o).__name__} after {o.steps} steps"]
    emit(args, "\n".join(lines), data)
    return 0


def cmd_denote(args) -> int:
    text = read_input(args.term)
    if args.dialect == "spcf":
        M = corpus.expand(parse_term(text, "spcf"))
        T = spcf.typecheck({}, M)
        e = spcf.denote_cutoff(M, args.cutoff, args.budget)
    else:
        M = parse_term(text, "lambda")
        T = lam.typecheck({}, M)
        e = lam.denote(M, sem=lam.Semantics(args.budget))
    emit(args, f"{e.label} : {T}", {"type": str(T), "element": e.label, "index": e.index})
    return 0


def cmd_check_biorder(args) -> int:
    B = biorder.FiniteBiorder.from_json(read_json(args.biorder))
    diags = biorder.validate(B)
    emit(args, "\n".join(diags) if diags else f"valid biorder with {B.size} elements",
         {"valid": not diags, "diagnostics": diags, "size": B.size})
    return 1 if diags else 0


def cmd_hom(args) -> int:
    sem = lam.Semantics(args.budget)
    A = lam.denote_type(parse_type(read_input(args.dom)), sem)
    B = lam.denote_type(parse_type(read_input(args.cod)), sem)
    fs = bifun.hom_set(A, B, args.budget)
    text = "\n".join(f.label() for f in fs) + f"\n{len(fs)} functions"
    emit(args, text, {"count": len(fs), "functions": [list(f.table) for f in fs],
                      "labels": [f.label() for f in fs]})
    return 0


def _element(B: biorder.FiniteBiorder, spec: str) -> Element:
    try:
        data = json.loads(spec)
    except json.JSONDecodeError:
        data = spec
    if isinstance(data, dict):
        data = data.get("index", data.get("element"))
    if isinstance(data, int):
        return Element(B, data)
    return Element(B, B.index(str(data)))


def cmd_define(args) -> int:
    sem = lam.Semantics(args.budget)
    T = parse_type(read_input(args.type))
    e = _element(lam.denote_type(T, sem), read_input(args.element))
    M = lam.define_element(e, T, sem)
    emit(args, show(M), {"type": str(T), "element": e.label, "term": show(M)})
    return 0


def cmd_retract(args) -> int:
    T = parse_type(read_input(args.type))
    rp = lam.retraction_terms(T)
    emit(args, f"target {rp.target}\ninj  {show(rp.inj)}\nproj {show(rp.proj)}",
         {"type": str(T), "target": str(rp.target), "inj": show(rp.inj), "proj": show(rp.proj)})
    return 0


def cmd_cps(args) -> int:
    M = corpus.expand(parse_term(read_input(args.term), "spcf"))
    K = spcf.cps(M)
    data = {"term": show(K)}
    text = show(K)
    code = 0
    if args.diff:
        direct = spcf.evaluate(M, args.fuel).kind
        via = omega.eval_prog(K, 10 * args.fuel).kind
        data.update(direct=direct, cps=via, same=direct == via)
        text += f"\ndirect={direct} cps={via} {'same' if direct == via else 'DIFFERENT'}"
        code = 0 if direct == via else 1
    emit(args, text, data)
    return code


def _space_json(space: games.StratSpace) -> dict:
    return {"biorder": space.biorder.to_json(),
            "strategies": [s.to_json()["plays"] for s in space.strategies]}


def cmd_game(args) -> int:
    G = games.Game.from_json(read_json(args.game))
    diags = games.validate_game(G)
    if diags:
        emit(args, "\n".join(diags), {"valid": False, "diagnostics": diags})
        return 1
    space = games.strat_biorder(G, args.budget)
    text = "\n".join(f"{i}: {s.label()}" for i, s in enumerate(space.strategies))
    emit(args, text, _space_json(space))
    return 0


def cmd_sequentialize(args) -> int:
    data = read_json(args.function)
    try:
        A, B = games.Game.from_json(data["src"]), games.Game.from_json(data["tgt"])
        table = tuple(int(j) for j in data["table"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BistableError("bad-json", f"function JSON malformed: {exc}") from None
    SA, SB = games.strat_biorder(A, args.budget), games.strat_biorder(B, args.budget)
    f = games.StratFunction(SA, SB, table)
    f.bifun  # checks the table fits
    s = games.sequentialize(f)
    emit(args, s.label(), s.to_json())
    return 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = [run_suite(n, n=args.n, seed=args.seed, k=args.cutoff, fuel=args.fuel) for n in names]
    lines = []
    for r in results:
        lines.append(r.line())
        lines += [f"  {f}" for f in r.failures]
    emit(args, "\n".join(lines), [r.to_json() for r in results])
    return 0 if all(r.passed for r in results) else 1


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--budget", type=int, default=bifun.DEFAULT_BUDGET)

    def positive(s: str) -> int:
        v = int(s)
        if v < 1:
            raise argparse.ArgumentTypeError("must be at least 1")
        return v

    def natural(s: str) -> int:
        v = int(s)
        if v < 0:
            raise argparse.ArgumentTypeError("must be non-negative")
        return v

    p = argparse.ArgumentParser(prog="bistable", description="Bistable biorders, SPCF and sequential algorithms.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        q = sub.add_parser(name, parents=[common], help=help_)
        q.set_defaults(fn=fn)
        return q

    q = add("eval", cmd_eval, "run an SPCF program")
    q.add_argument("term")
    q.add_argument("--fuel", type=natural, default=10 ** 5)
    q.add_argument("--trace", action="store_true")

    q = add("denote", cmd_denote, "denotation of a closed term")
    q.add_argument("term")
    q.add_argument("--dialect", choices=("lambda", "spcf"), default="lambda")
    q.add_argument("--cutoff", type=positive, default=8)

    q = add("check-biorder", cmd_check_biorder, "validate a biorder given as JSON")
    q.add_argument("biorder")

    q = add("hom", cmd_hom, "list the bistable functions between two types")
    q.add_argument("dom")
    q.add_argument("cod")

    q = add("define", cmd_define, "a term denoting an element (label or index)")
    q.add_argument("type")
    q.add_argument("element")

    q = add("retract", cmd_retract, "the definable retraction of a type into a first-order one")
    q.add_argument("type")

    q = add("cps", cmd_cps, "CPS-translate an SPCF program")
    q.add_argument("term")
    q.add_argument("--diff", action="store_true", help="also run both programs and compare")
    q.add_argument("--fuel", type=natural, default=10 ** 5)

    q = add("game", cmd_game, "the strategy biorder of a game given as JSON")
    q.add_argument("game")

    q = add("sequentialize", cmd_sequentialize, "the strategy computing a function between strategy spaces")
    q.add_argument("function")

    q = add("verify", cmd_verify, "run a named verification suite")
    q.add_argument("suite", choices=["all"] + list(SUITES))
    q.add_argument("--n", type=positive)
    q.add_argument("--seed", type=int, default=DEFAULT_SEED)
    q.add_argument("--cutoff", type=positive)
    q.add_argument("--fuel", type=natural)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except BistableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
