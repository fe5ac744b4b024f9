"""Polynomial satisfiability for CSP(<, <=, =, !=) and the zero-cost cases."""
from __future__ import annotations

from dataclasses import replace

from .graphs import condensation_order, strongly_connected_components
from .model import EQ, LEQ, LT, NEQ, Instance, Solution, evaluate


def check_satisfiable(inst: Instance) -> dict[str, int] | None:
    """Decide satisfiability of all constraints, ignoring softness and budgets.

    ``<=`` and ``<`` give an arc ``x -> y``, ``=`` gives arcs both ways.  The
    instance is unsatisfiable iff a ``<`` or ``!=`` constraint has both ends
    in one strongly connected component.  Otherwise the witness ranks the
    components along a topological order of the condensation.
    """
    pos = {v: i for i, v in enumerate(inst.variables)}
    n = len(pos)
    adj: list[list[int]] = [[] for _ in range(n)]
    for c in inst.constraints:
        x, y = pos[c.x], pos[c.y]
        if c.rel in (LT, LEQ, EQ):
            adj[x].append(y)
            if c.rel is EQ:
                adj[y].append(x)
    comp = strongly_connected_components(n, adj)
    for c in inst.constraints:
        if c.rel in (LT, NEQ) and comp[pos[c.x]] == comp[pos[c.y]]:
            return None
    rank = condensation_order(n, adj, comp)
    witness = {v: rank[comp[i]] for v, i in pos.items()}
    assert not evaluate(inst, witness).violated
    return witness


def trivial_solve(inst: Instance) -> tuple[Solution, dict[str, int]] | None:
    """Zero-cost solving for languages inside {=, <=} or {!=}.

    ``!=`` self-loops can never be satisfied; soft ones are deleted (and
    counted against the budgets), crisp ones make the instance infeasible.
    """
    rels = inst.relations
    if rels <= {EQ, LEQ}:
        return Solution.of(inst, ()), {v: 0 for v in inst.variables}
    if not rels <= {NEQ}:
        raise ValueError("trivial_solve needs relations inside {=, <=} or {!=}")
    loops = [c for c in inst.constraints if c.is_self_loop]
    if any(not c.soft for c in loops):
        return None
    sol = Solution.of(inst, (c.id for c in loops))
    if sol.cost > inst.k or sol.weight > inst.W:
        return None
    return sol, {v: i for i, v in enumerate(inst.variables)}


def drop_disequalities(inst: Instance) -> tuple[Instance, frozenset[int], dict[int, int]]:
    """Reduce an instance over {<, !=} to one over {<}.

    Once the ``<`` constraints hold, an injective perturbation satisfies every
    ``!=`` between distinct variables, so those are dropped.  ``!=``
    self-loops are returned in ``forced``: they must be deleted.  The third
    element maps kept constraint ids (renumbered from 0) back to input ids.
    """
    if not inst.relations <= {LT, NEQ}:
        raise ValueError("drop_disequalities needs relations inside {<, !=}")
    kept = [c for c in inst.constraints if c.rel is LT]
    forced = frozenset(c.id for c in inst.constraints if c.rel is NEQ and c.is_self_loop)
    out = tuple(replace(c, id=i) for i, c in enumerate(kept))
    return (replace(inst, constraints=out), forced, {i: c.id for i, c in enumerate(kept)})
