"""Cost-preserving rewrites and the four graph encodings.

Every reduction returns a ``BackMap``: a dict from output object id (a
constraint, arc, edge or cut request) to the input constraint id it came
from.  Graph encodings keep ids unchanged, so their back-maps are identities;
the twin rewrites renumber their output from 0.
"""
from __future__ import annotations

from dataclasses import replace
from typing import Iterable

from .graphs import Arc, GraphProblem, ProblemKind, Request
from .model import EQ, LEQ, LT, NEQ, Constraint, Instance, Relation, Solution, evaluate

BackMap = dict[int, int]


def _twin_rewrite(inst: Instance, source: Relation, twins) -> tuple[Instance, BackMap]:
    """Replace every ``source`` constraint by ``twins``, a function of the
    constraint returning (x, y, relation) triples.  Twins inherit softness
    and weight."""
    out: list[Constraint] = []
    back: BackMap = {}
    for c in inst.constraints:
        for x, y, rel in (twins(c) if c.rel is source else [(c.x, c.y, c.rel)]):
            back[len(out)] = c.id
            out.append(Constraint(len(out), x, y, rel, c.soft, c.weight))
    return replace(inst, constraints=tuple(out)), back


def rewrite_eq_as_leq(inst: Instance) -> tuple[Instance, BackMap]:
    """Replace each ``x = y`` by the twins ``x <= y`` and ``y <= x``."""
    return _twin_rewrite(inst, EQ, lambda c: [(c.x, c.y, LEQ), (c.y, c.x, LEQ)])


def rewrite_lt_as_leq_neq(inst: Instance) -> tuple[Instance, BackMap]:
    """Replace each ``x < y`` by the twins ``x <= y`` and ``x != y``."""
    return _twin_rewrite(inst, LT, lambda c: [(c.x, c.y, LEQ), (c.x, c.y, NEQ)])


def canonicalize_twins(out_inst: Instance, deleted: Iterable[int], ranks) -> frozenset[int]:
    """Keep only deleted output constraints that ``ranks`` actually violates.

    After a twin rewrite at most one twin of a source constraint is ever
    violated, so this never deletes both twins."""
    violated = set(evaluate(out_inst, ranks).violated)
    deleted = frozenset(deleted)
    if not violated <= deleted:
        raise ValueError("the assignment breaks constraints that were not deleted")
    return frozenset(violated)


def pull_back(inst: Instance, back: BackMap, deleted: Iterable[int]) -> Solution:
    """Input-side solution for a set of deleted output objects."""
    return Solution.of(inst, {back[o] for o in deleted})


def pull_back_verified(inst: Instance, back: BackMap, deleted: Iterable[int]):
    """Pull back a deletion set and confirm it with a satisfying assignment of the rest.

    Returns ``(Solution, ranks)`` or None when the pulled-back set leaves
    the input unsatisfiable."""
    from .satisfiability import check_satisfiable

    sol = pull_back(inst, back, deleted)
    ranks = check_satisfiable(inst.without(sol.deleted))
    if ranks is None:
        return None
    if not set(evaluate(inst, ranks).violated) <= sol.deleted:
        return None
    return sol, ranks


def _require(inst: Instance, allowed: set[Relation], name: str) -> None:
    extra = inst.relations - allowed
    if extra:
        symbols = ", ".join(sorted(r.symbol for r in extra))
        raise ValueError(f"{name} cannot encode relations {symbols}")


def _identity(inst: Instance) -> BackMap:
    return {c.id: c.id for c in inst.constraints}


def to_dfas(inst: Instance) -> tuple[GraphProblem, BackMap]:
    """One arc per ``<`` constraint.  A ``<`` self-loop becomes a loop arc,
    which every feedback arc set has to contain."""
    _require(inst, {LT}, "DFAS")
    arcs = tuple(Arc(c.id, c.x, c.y, c.soft, c.weight) for c in inst.constraints)
    return GraphProblem(ProblemKind.DFAS, inst.variables, arcs, (), inst.k, inst.W), _identity(inst)


def to_edge_multicut(inst: Instance) -> tuple[GraphProblem, BackMap]:
    _require(inst, {EQ, NEQ}, "Edge Multicut")
    edges = tuple(Arc(c.id, c.x, c.y, c.soft, c.weight) for c in inst.constraints if c.rel is EQ)
    pairs = tuple(Request(c.id, c.x, c.y, c.soft, c.weight) for c in inst.constraints if c.rel is NEQ)
    gp = GraphProblem(ProblemKind.EDGE_MULTICUT, inst.variables, edges, pairs, inst.k, inst.W)
    return gp, _identity(inst)


def to_subset_dfas(inst: Instance) -> tuple[GraphProblem, BackMap]:
    _require(inst, {LT, LEQ}, "Subset-DFAS")
    arcs = tuple(Arc(c.id, c.x, c.y, c.soft, c.weight, special=c.rel is LT) for c in inst.constraints)
    gp = GraphProblem(ProblemKind.SUBSET_DFAS, inst.variables, arcs, (), inst.k, inst.W)
    return gp, _identity(inst)


def to_dsmc(inst: Instance) -> tuple[GraphProblem, BackMap]:
    _require(inst, {LEQ, NEQ}, "DSMC")
    arcs = tuple(Arc(c.id, c.x, c.y, c.soft, c.weight) for c in inst.constraints if c.rel is LEQ)
    pairs = tuple(Request(c.id, c.x, c.y, c.soft, c.weight) for c in inst.constraints if c.rel is NEQ)
    return GraphProblem(ProblemKind.DSMC, inst.variables, arcs, pairs, inst.k, inst.W), _identity(inst)


_ARC_RELATION = {
    ProblemKind.DFAS: LT,
    ProblemKind.EDGE_MULTICUT: EQ,
    ProblemKind.DSMC: LEQ,
}


def graph_to_mincsp(gp: GraphProblem) -> tuple[Instance, BackMap]:
    """Constraint view of any of the four graph problems.

    Objects are taken in id order and renumbered ``0..m-1``; the back-map
    sends each new constraint id to the graph object it came from."""
    objs = sorted(list(gp.arcs) + list(gp.requests), key=lambda o: o.id)
    out, back = [], {}
    for o in objs:
        if isinstance(o, Request):
            c = Constraint(len(out), o.s, o.t, NEQ, o.soft, o.weight)
        else:
            rel = (LT if o.special else LEQ) if gp.kind is ProblemKind.SUBSET_DFAS \
                else _ARC_RELATION[gp.kind]
            c = Constraint(len(out), o.u, o.v, rel, o.soft, o.weight)
        back[c.id] = o.id
        out.append(c)
    return Instance(gp.vertices, tuple(out), gp.k, gp.W), back


def dsmc_to_mincsp(gp: GraphProblem) -> tuple[Instance, BackMap]:
    """Arcs become ``<=`` constraints and cut requests become ``!=``."""
    if gp.kind is not ProblemKind.DSMC:
        raise ValueError("dsmc_to_mincsp needs a DSMC instance")
    return graph_to_mincsp(gp)


ENCODERS = {
    ProblemKind.DFAS: to_dfas,
    ProblemKind.EDGE_MULTICUT: to_edge_multicut,
    ProblemKind.SUBSET_DFAS: to_subset_dfas,
    ProblemKind.DSMC: to_dsmc,
}
