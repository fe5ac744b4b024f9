"""Exact solving of bijunctive Boolean MinCSP instances.

Feasibility is the usual 2-SAT implication graph.  Optimisation is a
branch-and-bound over contradiction paths: when the kept clauses are
unsatisfiable, some variable ``x`` has paths ``x => !x`` and ``!x => x``;
a cheapest such pair (crisp edges free, soft edges cost one) is found by 0-1
BFS and every soft constraint labelling one of its edges is a branch.  Branch
``i`` deletes option ``i`` and marks options ``0..i-1`` as kept, so the
branches are disjoint.  If a node has too many options, its remaining soft
constraints are enumerated exhaustively instead.
"""
from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Hashable, Iterable

from ..graphs import strongly_connected_components
from ..model import INF
from .encoding import FALSE, IMP, NAND, OR, TRUE, BooleanInstance, clause_holds

BRANCH_WIDTH_LIMIT = 24


def _literals(clause) -> tuple[int, int]:
    """Clause as a disjunction of two literals; literal ``2x`` is ``x``, ``2x+1`` is ``!x``."""
    shape, a, b = clause
    if shape == TRUE:
        return 2 * a, 2 * a
    if shape == FALSE:
        return 2 * a + 1, 2 * a + 1
    if shape == IMP:
        return 2 * a + 1, 2 * b
    if shape == OR:
        return 2 * a, 2 * b
    if shape == NAND:
        return 2 * a + 1, 2 * b + 1
    raise ValueError(f"unknown clause shape {shape!r}")


def _ordered(pair):
    a, b = pair
    return (a, b) if a <= b else (b, a)


def _decide(n_lits: int, adj) -> list[bool] | None:
    comp = strongly_connected_components(n_lits, adj)
    out = []
    for x in range(n_lits // 2):
        if comp[2 * x] == comp[2 * x + 1]:
            return None
        # Tarjan numbers components in reverse topological order
        out.append(comp[2 * x] < comp[2 * x + 1])
    return out


def two_sat_satisfiable(clauses: Iterable[tuple[str, Hashable, Hashable]]) -> dict | None:
    """Satisfying assignment of 2-clauses over arbitrary hashable variables, or None."""
    clauses = list(clauses)
    index: dict[Hashable, int] = {}
    for _, a, b in clauses:
        index.setdefault(a, len(index))
        index.setdefault(b, len(index))
    adj: list[list[int]] = [[] for _ in range(2 * len(index))]
    for shape, a, b in clauses:
        la, lb = _literals((shape, index[a], index[b]))
        adj[la ^ 1].append(lb)
        if la != lb:
            adj[lb ^ 1].append(la)
    values = _decide(2 * len(index), adj)
    if values is None:
        return None
    return {v: values[i] for v, i in index.items()}


class _Problem:
    """Boolean instance after unit propagation of the crisp part.

    Only free variables survive, renumbered compactly.  ``soft`` maps each
    remaining soft constraint id to its residual clauses (literal pairs)."""

    def __init__(self, bi: BooleanInstance):
        nv = len(bi.variables)
        self.nv = nv
        crisp_pairs: set[tuple[int, int]] = set()
        soft_pairs: dict[int, set[tuple[int, int]]] = {}
        self.weight = {}
        for bc in bi.constraints:
            pairs = {_ordered(_literals(cl)) for cl in bc.clauses}
            if bc.soft:
                soft_pairs[bc.id] = pairs
                self.weight[bc.id] = bc.weight
            else:
                crisp_pairs |= pairs

        self.fixed = self._propagate(nv, crisp_pairs)
        self.infeasible = self.fixed is None
        if self.infeasible:
            return
        truth = self.fixed

        def residual(pair):
            """None if satisfied, () if falsified, else the remaining literal pair."""
            a, b = pair
            ta, tb = truth[a], truth[b]
            if ta or tb:
                return None
            if ta is False and tb is False:
                return ()
            if ta is False:
                return (b, b)
            if tb is False:
                return (a, a)
            return pair

        crisp_res = {r for r in map(residual, crisp_pairs) if r}
        self.forced: list[int] = []
        self.soft: dict[int, set[tuple[int, int]]] = {}
        for cid, pairs in soft_pairs.items():
            res = {residual(p) for p in pairs}
            res.discard(None)
            if () in res:
                self.forced.append(cid)
                continue
            res = {_ordered(p) for p in res} - crisp_res
            if res:
                self.soft[cid] = res

        free = sorted({lit // 2 for pair in crisp_res for lit in pair}
                      | {lit // 2 for pairs in self.soft.values() for pair in pairs for lit in pair})
        self.free = free
        local = {x: i for i, x in enumerate(free)}

        def loc(lit):
            return 2 * local[lit // 2] + (lit & 1)

        self.n_lits = 2 * len(free)
        self.crisp_adj: list[list[int]] = [[] for _ in range(self.n_lits)]
        for a, b in crisp_res:
            a, b = loc(a), loc(b)
            self.crisp_adj[a ^ 1].append(b)
            if a != b:
                self.crisp_adj[b ^ 1].append(a)
        edges: dict[tuple[int, int], list[int]] = {}
        for cid in sorted(self.soft):
            for a, b in self.soft[cid]:
                a, b = loc(a), loc(b)
                for e in {(a ^ 1, b), (b ^ 1, a)}:
                    edges.setdefault(e, []).append(cid)
        self.soft_edges = [(u, v, tuple(cs)) for (u, v), cs in sorted(edges.items())]

    @staticmethod
    def _propagate(nv, crisp_pairs):
        truth: list[bool | None] = [None] * (2 * nv)
        imp: dict[int, list[int]] = {}
        queue = deque()
        for a, b in crisp_pairs:
            if a == b:
                queue.append(a)
            else:
                imp.setdefault(a ^ 1, []).append(b)
                imp.setdefault(b ^ 1, []).append(a)
        while queue:
            lit = queue.popleft()
            if truth[lit]:
                continue
            if truth[lit] is False:
                return None
            truth[lit], truth[lit ^ 1] = True, False
            queue.extend(imp.get(lit, ()))
        return truth

    def adjacency(self, deleted: frozenset[int]):
        adj = [list(row) for row in self.crisp_adj]
        for u, v, cs in self.soft_edges:
            if any(c not in deleted for c in cs):
                adj[u].append(v)
        return adj

    def conflict_options(self, deleted, kept, x) -> list[int] | None:
        """Soft constraints labelling a cheapest pair of paths ``x => !x => x``."""
        labels = set()
        for src, dst in ((2 * x, 2 * x + 1), (2 * x + 1, 2 * x)):
            path = self._path(src, dst, deleted, kept)
            if path is None:
                return None
            labels |= path
        return sorted(labels)

    def _path(self, src, dst, deleted, kept):
        n = self.n_lits
        out: list[list[tuple[int, int | None]]] = [[] for _ in range(n)]
        for u in range(n):
            out[u] = [(v, None) for v in self.crisp_adj[u]]
        for u, v, cs in self.soft_edges:
            live = [c for c in cs if c not in deleted]
            if not live:
                continue
            out[u].append((v, None if any(c in kept for c in live) else live[0]))
        dist = [INF] * n
        prev: list[tuple[int, int | None] | None] = [None] * n
        dist[src] = 0
        dq = deque([src])
        while dq:
            u = dq.popleft()
            for v, label in out[u]:
                nd = dist[u] + (label is not None)
                if nd < dist[v]:
                    dist[v] = nd
                    prev[v] = (u, label)
                    if label is None:
                        dq.appendleft(v)
                    else:
                        dq.append(v)
        if dist[dst] == INF:
            return None
        labels = set()
        v = dst
        while v != src:
            u, label = prev[v]
            if label is not None:
                labels.add(label)
            v = u
        return labels


def solve_boolean_mincsp(bi: BooleanInstance, bound: tuple[int, int | float] | None = None,
                         first: bool = False, width_limit: int = BRANCH_WIDTH_LIMIT):
    """Deletion set of soft constraints minimal by (cost, weight, sorted ids).

    ``bound`` optionally caps (cost, weight) lexicographically (inclusive).
    With ``first`` the search stops at the first feasible deletion set.
    Returns ``(frozenset of ids, list of bool)`` or None.
    """
    prob = _Problem(bi)
    if prob.infeasible:
        return None
    k, W = bi.k, bi.W
    base = frozenset(prob.forced)
    base_cost = len(base)
    base_weight = sum(prob.weight[c] for c in base)
    best: list = [None]  # (cost, weight, ids, local assignment)

    def too_costly(cost, weight):
        if cost > k or weight > W:
            return True
        if bound is not None and (cost, weight) > tuple(bound):
            return True
        b = best[0]
        return b is not None and (cost, weight) > (b[0], b[1])

    def offer(cost, weight, deleted, values):
        key = (cost, weight, tuple(sorted(deleted)))
        if best[0] is None or key < best[0][:3]:
            best[0] = (*key, values)

    def check(deleted):
        adj = prob.adjacency(deleted)
        comp = strongly_connected_components(prob.n_lits, adj)
        for x in range(prob.n_lits // 2):
            if comp[2 * x] == comp[2 * x + 1]:
                return x, None
        return None, [comp[2 * x] < comp[2 * x + 1] for x in range(prob.n_lits // 2)]

    def exhaustive(deleted, kept, cost, weight):
        rest = [c for c in sorted(prob.soft) if c not in deleted and c not in kept]
        for size in range(0, k - cost + 1):
            for extra in combinations(rest, size):
                w = weight + sum(prob.weight[c] for c in extra)
                if too_costly(cost + size, w):
                    continue
                trial = deleted | frozenset(extra)
                x, values = check(trial)
                if values is not None:
                    offer(cost + size, w, trial, values)
                    if first:
                        return

    def explore(deleted, kept, cost, weight):
        if too_costly(cost, weight) or (first and best[0] is not None):
            return
        x, values = check(deleted)
        if values is not None:
            offer(cost, weight, deleted, values)
            return
        options = prob.conflict_options(deleted, kept, x)
        if not options or cost + 1 > k:
            return
        if len(options) > width_limit:
            exhaustive(deleted, kept, cost, weight)
            return
        for i, c in enumerate(options):
            explore(deleted | {c}, kept | frozenset(options[:i]), cost + 1, weight + prob.weight[c])

    explore(base, frozenset(), base_cost, base_weight)
    if best[0] is None:
        return None
    _, _, ids, local_values = best[0]
    beta = [bool(t) for t in prob.fixed[0::2]]
    for i, x in enumerate(prob.free):
        beta[x] = local_values[i]
    deleted = frozenset(ids)
    for bc in bi.constraints:
        if bc.id in deleted:
            continue
        if not all(clause_holds(cl, beta) for cl in bc.clauses):
            raise AssertionError(f"Boolean witness violates kept constraint {bc.id}")
    return deleted, beta


def brute_force_boolean(bi: BooleanInstance):
    """Reference optimum: soft subsets by increasing size, each decided by 2-SAT."""
    soft = sorted(bc.id for bc in bi.constraints if bc.soft)
    weights = {bc.id: bc.weight for bc in bi.constraints}
    for size in range(min(bi.k, len(soft)) + 1):
        best = None
        for subset in combinations(soft, size):
            w = sum(weights[c] for c in subset)
            if w > bi.W or (best is not None and (w, subset) >= best[:2]):
                continue
            chosen = set(subset)
            clauses = [cl for bc in bi.constraints if bc.id not in chosen for cl in bc.clauses]
            if _assignment_exists(len(bi.variables), clauses):
                best = (w, subset)
        if best is not None:
            return frozenset(best[1]), size, best[0]
    return None


def _assignment_exists(nv, clauses) -> bool:
    adj: list[list[int]] = [[] for _ in range(2 * nv)]
    for cl in clauses:
        a, b = _literals(cl)
        adj[a ^ 1].append(b)
        if a != b:
            adj[b ^ 1].append(a)
    return _decide(2 * nv, adj) is not None
