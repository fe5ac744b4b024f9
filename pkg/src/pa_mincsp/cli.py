"""Command-line interface: ``pa-mincsp <command> ...`` or ``python -m pa_mincsp``.

Exit status: 0 YES or pass, 1 NO or fail, 2 usage or format error, 3 guard exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .graphs import ProblemKind, parse_graph_problem, serialize_graph_problem
from .model import (INF, FormatError, GuardExceeded, LanguageClass, Solution, _as_relation,
                    classify_language, parse_instance, parse_weight_token, serialize_instance)

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

CLASS_NAMES = {
    LanguageClass.POLY_TIME: "PolyTime",
    LanguageClass.FPT: "FPT",
    LanguageClass.W1_HARD: "W1Hard",
}


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit_solution(out, sol: Solution, ranks=None, values=None, rational=False):
    out.write(f"YES cost={sol.cost} weight={sol.weight}\n")
    for cid in sorted(sol.deleted):
        out.write(f"delete {cid}\n")
    if ranks is not None:
        for v in ranks:
            out.write(f"assign {v} {ranks[v]}\n")
    if rational and values is not None:
        for v in values:
            q = values[v]
            out.write(f"value {v} {q.numerator}/{q.denominator}\n")


def _detect(text: str) -> str:
    heads = set()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].split()
        if line:
            heads.add(line[0])
    if "part" in heads:
        return "clique"
    if heads & {"arc", "edge", "pair", "kind"}:
        return "graph"
    return "instance"


# commands -------------------------------------------------------------------

def cmd_sat(args, out) -> int:
    from .satisfiability import check_satisfiable

    inst = parse_instance(_read(args.file))
    ranks = check_satisfiable(inst)
    if ranks is None:
        out.write("NO\n")
        return EXIT_NO
    out.write("YES\n")
    for v in inst.variables:
        out.write(f"assign {v} {ranks[v]}\n")
    return EXIT_YES


def cmd_solve(args, out) -> int:
    from .dispatch import dispatch_solve

    inst = parse_instance(_read(args.file))
    try:
        res = dispatch_solve(inst, engine=args.engine)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for note in res.notices:
        print(note, file=sys.stderr)
    if res.status != "YES":
        out.write(res.status + "\n")
        return EXIT_NO
    _emit_solution(out, res.solution, res.ranks, res.values, args.rational)
    return EXIT_YES


def cmd_classify(args, out) -> int:
    if args.relations is not None:
        rels = set()
        for tok in filter(None, args.relations.split(",")):
            try:
                rels.add(_as_relation(tok.strip()))
            except ValueError as exc:
                raise UsageError(str(exc)) from None
    elif args.file is not None:
        rels = parse_instance(_read(args.file)).relations
    else:
        raise UsageError("classify needs a FILE or --relations")
    out.write(CLASS_NAMES[classify_language(rels)] + "\n")
    return EXIT_YES


def cmd_reduce(args, out) -> int:
    from .reductions import ENCODERS, graph_to_mincsp

    text = _read(args.file)
    if args.to == "mincsp":
        inst, _ = graph_to_mincsp(parse_graph_problem(text))
        out.write(serialize_instance(inst))
        return EXIT_YES
    inst = parse_instance(text)
    try:
        gp, _ = ENCODERS[ProblemKind(args.to)](inst)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(serialize_graph_problem(gp))
    return EXIT_YES


def cmd_booleanize(args, out) -> int:
    from .fpt import CompressedInstance, booleanize, dump_boolean_instance

    inst = parse_instance(_read(args.file))
    U = tuple(filter(None, (args.order or "").split(",")))
    k = inst.k if args.k is None else args.k
    W = inst.W if args.w is None else parse_weight_token(0, args.w)
    try:
        ci = CompressedInstance(inst, U, k, W)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    bi, _ = booleanize(ci)
    out.write(dump_boolean_instance(bi))
    return EXIT_YES


def cmd_oracle(args, out) -> int:
    from .oracle import (brute_force_dsmc, brute_force_graph, brute_force_mincsp,
                         brute_force_multicolored_clique)

    text = _read(args.file)
    kind = _detect(text)
    if kind == "clique":
        from .gadgets import parse_clique

        found = brute_force_multicolored_clique(parse_clique(text))
        if found is None:
            out.write("NO\n")
            return EXIT_NO
        out.write("YES\n")
        for v in sorted(found):
            out.write(f"vertex {v}\n")
        return EXIT_YES
    if kind == "graph":
        gp = parse_graph_problem(text)
        unit = all(gp.objects()[i].weight == 1 for i in gp.deletable())
        if gp.kind is ProblemKind.DSMC and gp.W == INF and unit:
            ids = brute_force_dsmc(gp)
            sol = None if ids is None else Solution(ids, len(ids), sum(gp.objects()[i].weight for i in ids))
        else:
            sol = brute_force_graph(gp)
        if sol is None:
            out.write("NO\n")
            return EXIT_NO
        _emit_solution(out, sol)
        return EXIT_YES
    from .model import normalize

    inst = normalize(parse_instance(text))
    found = brute_force_mincsp(inst)
    if found is None:
        out.write("NO\n")
        return EXIT_NO
    _emit_solution(out, found[0], found[1])
    return EXIT_YES


def cmd_gadget(args, out) -> int:
    from .gadgets import (build_dsmc_from_clique, clique_to_cut, cut_to_clique, parse_clique,
                          verify_dsmc_solution)

    g = parse_clique(_read(args.file))
    try:
        d, m = build_dsmc_from_clique(g)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.action == "build":
        text = serialize_graph_problem(d)
        if args.output:
            Path(args.output).write_text(text)
            map_path = args.map or args.output + ".map.json"
        else:
            out.write(text)
            map_path = args.map
        if map_path:
            Path(map_path).write_text(m.to_json())
        return EXIT_YES

    from .oracle import (MAX_DSMC_BUDGET, MAX_DSMC_OBJECTS, brute_force_dsmc,
                         brute_force_multicolored_clique)

    clique = brute_force_multicolored_clique(g)
    ok = True
    if clique is not None:
        cut = clique_to_cut(m, clique)
        forward = verify_dsmc_solution(d, cut) and len(cut) == d.k
        back = cut_to_clique(m, cut) == clique
        out.write(f"forward clique={' '.join(sorted(clique))} cut-size={len(cut)} "
                  f"valid={forward} round-trip={back}\n")
        ok = forward and back
    else:
        out.write("forward no clique\n")
    if len(d.deletable()) <= MAX_DSMC_OBJECTS and d.k <= MAX_DSMC_BUDGET:
        X = brute_force_dsmc(d)
        agree = (X is None) == (clique is None)
        detail = "none" if X is None else f"size {len(X)}"
        if X is not None:
            picked = cut_to_clique(m, X)
            adjacent = picked is not None and all(
                g.adjacent(u, v) for u in picked for v in picked if u < v)
            detail += f" picks a clique={adjacent}"
            agree = agree and adjacent
        out.write(f"exhaustive cut {detail} equivalent={agree}\n")
        ok = ok and agree
    else:
        out.write("exhaustive check skipped: beyond oracle guards (forward only)\n")
    out.write("PASS\n" if ok else "FAIL\n")
    return EXIT_YES if ok else EXIT_NO


def cmd_gen(args, out) -> int:
    from .generate import gen_random_instance

    W = INF if args.w is None else parse_weight_token(0, args.w)
    try:
        inst = gen_random_instance(args.seed, args.vars, args.constraints, args.relations.split(","),
                                   args.crisp_prob, args.max_weight, args.k, W, args.self_loops)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(serialize_instance(inst))
    return EXIT_YES


def cmd_bench(args, out) -> int:
    from .bench import SUITES, run_suite

    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    report = run_suite(args.suite, seed=args.seed, count=args.count,
                       deterministic=args.deterministic, echo=lambda s: out.write(s + "\n"))
    return EXIT_YES if report.ok else EXIT_NO


# parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(add_help=False)
    top.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    top.add_argument("--deterministic", action="store_true",
                     help="single-process execution with fixed ordering")
    # repeated after the subcommand; SUPPRESS keeps a value given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--deterministic", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="pa-mincsp", description=__doc__.splitlines()[0],
                                parents=[top])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sat", parents=[common], help="decide satisfiability ignoring budgets")
    s.add_argument("file")
    s.set_defaults(run=cmd_sat)

    s = sub.add_parser("solve", parents=[common], help="minimum-deletion solving")
    s.add_argument("file")
    s.add_argument("--engine", choices=("auto", "pipeline", "oracle"), default="auto")
    s.add_argument("--rational", action="store_true", help="also print exact rational values")
    s.set_defaults(run=cmd_solve)

    s = sub.add_parser("classify", parents=[common], help="complexity class of a language")
    s.add_argument("file", nargs="?")
    s.add_argument("--relations", help="comma-separated tokens, e.g. lt,neq")
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("reduce", parents=[common], help="encode as a graph problem or back")
    s.add_argument("file")
    s.add_argument("--to", required=True,
                   choices=("dfas", "multicut", "subset-dfas", "dsmc", "mincsp"))
    s.set_defaults(run=cmd_reduce)

    s = sub.add_parser("booleanize", parents=[common], help="dump the Boolean encoding")
    s.add_argument("file")
    s.add_argument("--order", help="comma-separated distinguished variables, smallest first")
    s.add_argument("--k", type=int)
    s.add_argument("--w")
    s.set_defaults(run=cmd_booleanize)

    s = sub.add_parser("oracle", parents=[common], help="brute-force ground truth")
    s.add_argument("file")
    s.set_defaults(run=cmd_oracle)

    s = sub.add_parser("gadget", parents=[common], help="clique-to-multicut gadget")
    s.add_argument("action", choices=("build", "verify"))
    s.add_argument("file")
    s.add_argument("-o", "--output", help="write the DSMC instance here")
    s.add_argument("--map", help="side-map JSON path (default OUTPUT.map.json)")
    s.set_defaults(run=cmd_gadget)

    s = sub.add_parser("gen", parents=[common], help="random instance")
    s.add_argument("--vars", type=int, default=4)
    s.add_argument("--constraints", type=int, default=6)
    s.add_argument("--relations", default="lt,eq,neq")
    s.add_argument("--crisp-prob", type=float, default=0.0)
    s.add_argument("--max-weight", type=int, default=1)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--w")
    s.add_argument("--self-loops", action="store_true")
    s.set_defaults(run=cmd_gen)

    s = sub.add_parser("bench", parents=[common], help="run an acceptance suite")
    s.add_argument("suite")
    s.add_argument("--count", type=int)
    s.set_defaults(run=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args, sys.stdout)
    except (UsageError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
