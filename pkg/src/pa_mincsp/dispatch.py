"""Route an instance to the right engine by the relations it actually uses."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .model import (EQ, LEQ, LT, NEQ, Instance, LanguageClass, Solution, classify_language,
                    evaluate, normalize)
from .satisfiability import check_satisfiable, drop_disequalities, trivial_solve

ENGINES = ("auto", "pipeline", "oracle")

HARDNESS_NOTICE = ("notice: {<=, !=} is present, so this language is W[1]-hard; "
                   "solving with the exhaustive oracle")
NON_FPT_NOTICE = "notice: exact, non-FPT engine (twin rewrite of = then the oracle)"


@dataclass
class DispatchResult:
    status: str                      # "YES", "NO" or "UNSAT-CRISP"
    route: str
    solution: Solution | None = None
    ranks: dict[str, int] | None = None
    values: dict[str, Fraction] | None = None
    notices: list[str] = field(default_factory=list)


def _injective(inst: Instance, ranks: dict[str, int]) -> dict[str, int]:
    """Break ties by declaration order; strict comparisons are unchanged."""
    pos = {v: i for i, v in enumerate(inst.variables)}
    ordered = sorted(inst.variables, key=lambda v: (ranks[v], pos[v]))
    return {v: i for i, v in enumerate(ordered)}


def _via_pipeline(inst: Instance):
    from .fpt import solve

    return solve(inst, with_values=True)


def _lt_neq(inst: Instance):
    from .fpt import solve

    reduced, forced, back = drop_disequalities(inst)
    # the != self-loops still have to be paid for; the pipeline forces them
    loops = []
    for cid in sorted(forced):
        c = inst.constraint(cid)
        back[len(reduced.constraints) + len(loops)] = cid
        loops.append(replace(c, id=len(reduced.constraints) + len(loops)))
    found = solve(replace(reduced, constraints=reduced.constraints + tuple(loops)))
    if found is None:
        return None
    sol, ranks = found
    return Solution.of(inst, {back[c] for c in sol.deleted}), _injective(inst, ranks), None


def _via_rewrite_then_oracle(inst: Instance):
    from .oracle import brute_force_mincsp
    from .reductions import canonicalize_twins, pull_back, rewrite_eq_as_leq

    out, back = rewrite_eq_as_leq(inst)
    found = brute_force_mincsp(out)
    if found is None:
        return None
    sol, ranks = found
    kept = canonicalize_twins(out, sol.deleted, ranks)
    return pull_back(inst, back, kept), ranks, None


def _via_oracle(inst: Instance):
    from .oracle import brute_force_mincsp

    found = brute_force_mincsp(inst)
    return None if found is None else (*found, None)


def dispatch_solve(inst: Instance, engine: str = "auto") -> DispatchResult:
    """Solve ``inst`` with the engine its language calls for.

    ``engine`` may force ``pipeline`` (only for {<, =, !=}) or ``oracle``.
    """
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    inst = normalize(inst)
    rels = inst.relations
    cls = classify_language(rels)
    notices: list[str] = []
    crisp = inst.subinstance(c.id for c in inst.constraints if not c.soft)
    if check_satisfiable(crisp) is None:
        return DispatchResult("UNSAT-CRISP", "crisp-check")

    if engine == "oracle":
        route, found = "oracle", _via_oracle(inst)
    elif engine == "pipeline":
        if not rels <= {LT, EQ, NEQ}:
            raise ValueError("the pipeline engine handles only <, = and !=")
        route, found = "pipeline", _via_pipeline(inst)
    elif cls is LanguageClass.POLY_TIME:
        route = "trivial"
        found = trivial_solve(inst)
        found = None if found is None else (*found, None)
    elif rels <= {LT, NEQ}:
        route, found = "lt-neq", _lt_neq(inst)
    elif rels <= {LT, EQ, NEQ}:
        route, found = "pipeline", _via_pipeline(inst)
    elif rels <= {LT, LEQ, EQ}:
        notices.append(NON_FPT_NOTICE)
        route, found = "rewrite-oracle", _via_rewrite_then_oracle(inst)
    else:
        notices.append(HARDNESS_NOTICE)
        route, found = "oracle", _via_oracle(inst)

    if found is None:
        return DispatchResult("NO", route, notices=notices)
    sol, ranks, values = found
    report = evaluate(inst, ranks)
    if not set(report.violated) <= sol.deleted:
        raise AssertionError(f"{route} returned a witness breaking kept constraints")
    ranks = {v: ranks[v] for v in inst.variables}
    values = {v: Fraction(ranks[v]) if values is None else values[v] for v in inst.variables}
    return DispatchResult("YES", route, sol, ranks, values, notices)
