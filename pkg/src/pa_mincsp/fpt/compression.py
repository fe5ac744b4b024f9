"""Iterative compression for weighted MinCSP over {<, =, !=}.

A solution ``X`` of at most ``k`` constraints is maintained while soft
constraints are added in id order.  Whenever ``X`` plus the new constraint
cannot simply be kept, :func:`compress_step` searches for a replacement: it
guesses which part ``Y`` of the old solution stays deleted and how the
variables of the rest are ordered, merges variables guessed equal, and hands
the remaining problem to the Boolean encoding.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ..model import (EQ, INF, LT, NEQ, Constraint, GuardExceeded, Instance, Solution,
                     evaluate, normalize)
from ..satisfiability import check_satisfiable
from .boolean import solve_boolean_mincsp
from .encoding import CompressedInstance, booleanize, lift_solution

MAX_ORDER_ELEMENTS = 12


def enumerate_weak_orders(elements, constraints=()):
    """Yield every weak order of ``elements`` as a dict element -> rank (from 0).

    Orders are built by inserting elements one at a time, either into an
    existing block or as a new block in any gap.  ``constraints`` (objects
    with ``x``, ``y`` and ``rel``) prune partial orders as soon as both ends
    are placed, so only orders satisfying all of them are produced.
    """
    elements = list(elements)
    if len(elements) > MAX_ORDER_ELEMENTS:
        raise GuardExceeded(f"at most {MAX_ORDER_ELEMENTS} elements, got {len(elements)}")
    position = {e: i for i, e in enumerate(elements)}
    checks: list[list] = [[] for _ in elements]
    for c in constraints:
        checks[max(position[c.x], position[c.y])].append(c)
    block_of: dict = {}
    blocks: list[list] = []

    def consistent(i):
        return all(c.rel.holds(block_of[c.x], block_of[c.y]) for c in checks[i])

    def place(i):
        if i == len(elements):
            yield dict(block_of)
            return
        e = elements[i]
        for b in range(len(blocks)):
            blocks[b].append(e)
            block_of[e] = b
            if consistent(i):
                yield from place(i + 1)
            blocks[b].pop()
        for gap in range(len(blocks) + 1):
            blocks.insert(gap, [e])
            for b in range(gap, len(blocks)):
                for x in blocks[b]:
                    block_of[x] = b
            if consistent(i):
                yield from place(i + 1)
            blocks.pop(gap)
            for b in range(gap, len(blocks)):
                for x in blocks[b]:
                    block_of[x] = b
        del block_of[e]

    yield from place(0)


@dataclass
class _Best:
    key: tuple | None = None
    ranks: dict | None = None
    values: dict | None = None

    def offer(self, key, ranks, values) -> None:
        if self.key is None or key < self.key:
            self.key, self.ranks, self.values = key, ranks, values

    def beats(self, cost, weight) -> bool:
        """Is the incumbent strictly better than anything of this (cost, weight)?"""
        return self.key is not None and (cost, weight) > self.key[:2]


def _key(ids, weight_of) -> tuple:
    ids = tuple(sorted(ids))
    return len(ids), sum(weight_of[i] for i in ids), ids


def compress_step(inst: Instance, X_in, k: int, W=INF, incumbent=None, first: bool = False):
    """Best solution of ``inst`` within (k, W), given that ``inst`` minus ``X_in`` is satisfiable.

    ``incumbent`` is an optional ``(Solution, ranks)`` to beat; with ``first``
    the search stops at the first solution found.  Returns
    ``(Solution, ranks, values)`` or None.
    """
    by_id = inst.by_id()
    X_in = sorted(X_in)
    rest = inst.without(X_in)
    if check_satisfiable(rest) is None:
        raise ValueError("compress_step needs the instance minus X_in to be satisfiable")
    if any(not by_id[c].soft for c in X_in):
        raise ValueError("X_in may only contain soft constraints")
    weight_of = {c.id: c.weight for c in inst.constraints}
    best = _Best()
    if incumbent is not None:
        sol, ranks = incumbent
        best.offer(_key(sol.deleted, weight_of), dict(ranks),
                   {v: Fraction(r) for v, r in ranks.items()})

    for size in range(len(X_in) + 1):
        for Y in combinations(X_in, size):
            y_weight = sum(weight_of[c] for c in Y)
            if size > k or y_weight > W or best.beats(size, y_weight):
                continue
            kept = [by_id[c] for c in X_in if c not in Y]
            names = {v for c in kept for v in (c.x, c.y)}
            scope = [v for v in inst.variables if v in names]
            for order in enumerate_weak_orders(scope, kept):
                _branch(inst, rest, Y, order, k, W, weight_of, best, first)
                if first and best.key is not None:
                    return _result(inst, best)
    return _result(inst, best) if best.key is not None else None


def _result(inst, best):
    sol = Solution(frozenset(best.key[2]), best.key[0], best.key[1])
    report = evaluate(inst, best.ranks)
    if not set(report.violated) <= sol.deleted:
        raise AssertionError("witness breaks constraints outside the deletion set")
    return sol, best.ranks, best.values


def _branch(inst, rest, Y, order, k, W, weight_of, best, first):
    nblocks = max(order.values(), default=-1) + 1
    rep_of_block: list = [None] * nblocks
    for v in inst.variables:
        b = order.get(v)
        if b is not None and rep_of_block[b] is None:
            rep_of_block[b] = v
    rep = {v: rep_of_block[order[v]] if v in order else v for v in inst.variables}
    U = tuple(rep_of_block)

    forced, residual = [], []
    for c in rest.constraints:
        x, y = rep[c.x], rep[c.y]
        if x == y:
            if c.rel is EQ:
                continue
            if not c.soft:
                return
            forced.append(c.id)
            continue
        residual.append(c if (x, y) == (c.x, c.y) else Constraint(c.id, x, y, c.rel, c.soft, c.weight))

    cost = len(Y) + len(forced)
    weight = sum(weight_of[c] for c in Y) + sum(weight_of[c] for c in forced)
    if cost > k or weight > W or best.beats(cost, weight):
        return

    variables = tuple(v for v in inst.variables if rep[v] == v)
    base = Instance(variables, tuple(residual), k, W)
    chain = tuple(Constraint(-1 - i, U[i], U[i + 1], LT, False) for i in range(len(U) - 1))
    crisp_core = Instance(variables, tuple(c for c in residual if not c.soft) + chain, k, W)
    if check_satisfiable(crisp_core) is None:
        return
    alpha = {u: i for i, u in enumerate(U)}
    must = [c for c in residual if c.soft and c.x in alpha and c.y in alpha
            and not c.rel.holds(alpha[c.x], alpha[c.y])]
    if cost + len(must) > k or weight + sum(c.weight for c in must) > W:
        return

    if not U:
        ranks = check_satisfiable(base)
        values = {v: Fraction(r) for v, r in ranks.items()}
        deleted = list(Y) + forced
    else:
        ci = CompressedInstance(base, U, k - cost, W - weight)
        bi, enc = booleanize(ci)
        bound = None
        if best.key is not None:
            bound = (best.key[0] - cost, best.key[1] - weight)
        found = solve_boolean_mincsp(bi, bound=bound, first=first)
        if found is None:
            return
        bool_deleted, beta = found
        sol, _, values = lift_solution(bi, beta, bool_deleted, ci, enc)
        deleted = list(Y) + forced + sorted(sol.deleted)
    full_values = {v: values[rep[v]] for v in inst.variables}
    order_of = {val: r for r, val in enumerate(sorted(set(full_values.values())))}
    ranks = {v: order_of[val] for v, val in full_values.items()}
    best.offer(_key(deleted, weight_of), ranks, full_values)


def compression_driver(inst: Instance, k: int, W=INF):
    """Optimal solution of a self-loop-free instance over {<, =, !=} within (k, W).

    Returns ``(Solution, ranks, values)`` or None.
    """
    crisp = [c.id for c in inst.constraints if not c.soft]
    soft = sorted(c.id for c in inst.constraints if c.soft)
    weight_of = {c.id: c.weight for c in inst.constraints}
    if check_satisfiable(inst.subinstance(crisp)) is None:
        return None
    X: set[int] = set()
    prefix = list(crisp)
    for cid in soft:
        prefix.append(cid)
        sub = inst.subinstance(prefix)
        if check_satisfiable(sub.without(X)) is not None:
            continue
        if len(X) + 1 <= k and sum(weight_of[c] for c in X) + weight_of[cid] <= W:
            X.add(cid)
            continue
        found = compress_step(sub, X | {cid}, k, W, first=True)
        if found is None:
            return None
        X = set(found[0].deleted)
    full = check_satisfiable(inst.without(X))
    if not X:
        return Solution.of(inst, ()), full, {v: Fraction(r) for v, r in full.items()}
    incumbent = (Solution.of(inst, X), full)
    return compress_step(inst, X, k, W, incumbent=incumbent)


def solve(inst: Instance, with_values: bool = False):
    """Optimal (cost, weight, ids) solution of an instance over {<, =, !=}.

    Returns ``(Solution, ranks)``, or with ``with_values`` also exact
    rational values for every variable; None when no solution fits the budgets.
    """
    if not inst.relations <= {LT, EQ, NEQ}:
        raise ValueError("the compression pipeline handles only <, = and !=")
    inst = normalize(inst)
    loops = [c for c in inst.constraints if c.is_self_loop]
    if any(not c.soft and c.rel is not EQ for c in loops):
        return None
    forced = [c for c in loops if c.rel is not EQ]
    f_cost, f_weight = len(forced), sum(c.weight for c in forced)
    if f_cost > inst.k or f_weight > inst.W:
        return None
    reduced = inst.without(c.id for c in loops)
    found = compression_driver(reduced, inst.k - f_cost, inst.W - f_weight)
    if found is None:
        return None
    sol, ranks, values = found
    sol = Solution.of(inst, sol.deleted | {c.id for c in forced})
    if not set(evaluate(inst, ranks).violated) <= sol.deleted:
        raise AssertionError("pipeline witness breaks a kept constraint")
    return (sol, ranks, values) if with_values else (sol, ranks)
