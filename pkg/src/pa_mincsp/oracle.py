"""Brute-force ground truth.

Nothing here prunes on structure: every routine enumerates its whole search
space (weak orders, object subsets, vertex transversals) under hard size
guards and raises :class:`GuardExceeded` instead of truncating.
"""
from __future__ import annotations

import math
from itertools import combinations, permutations, product

import numpy as np

from .gadgets import CliqueInstance
from .graphs import GraphProblem, ProblemKind, graph_is_feasible
from .model import EQ, INF, LEQ, LT, GuardExceeded, Instance, Solution

MAX_ORACLE_VARIABLES = 9
MAX_DSMC_OBJECTS = 26
MAX_DSMC_BUDGET = 13
MAX_GRAPH_OBJECTS = 22
MAX_CLIQUE_SELECTIONS = 10**6


def _set_partitions(n: int):
    """Restricted growth strings of length ``n``."""
    if n == 0:
        yield ()
        return
    block = [0] * n

    def rec(i, used):
        if i == n:
            yield tuple(block)
            return
        for b in range(used + 1):
            block[i] = b
            yield from rec(i + 1, max(used, b + 1))

    yield from rec(1, 1)


def all_weak_orders(n: int):
    """Every weak order on ``n`` items as a rank tuple: a set partition times an
    ordering of its blocks."""
    for rgs in _set_partitions(n):
        nblocks = max(rgs, default=-1) + 1
        for perm in permutations(range(nblocks)):
            yield tuple(perm[b] for b in rgs)


def brute_force_mincsp(inst: Instance) -> tuple[Solution, dict[str, int]] | None:
    n = len(inst.variables)
    if n > MAX_ORACLE_VARIABLES:
        raise GuardExceeded(f"oracle handles at most {MAX_ORACLE_VARIABLES} variables, got {n}")
    pos = {v: i for i, v in enumerate(inst.variables)}
    crisp = [(pos[c.x], pos[c.y], c.rel) for c in inst.constraints if not c.soft]
    soft = sorted(
        ((pos[c.x], pos[c.y], c.rel, c.weight, c.id) for c in inst.constraints if c.soft),
        key=lambda t: t[4],
    )
    best_key = None
    best_rank = None
    for rank in all_weak_orders(n):
        if not all(_holds(rel, rank[x], rank[y]) for x, y, rel in crisp):
            continue
        ids = []
        weight = 0
        for x, y, rel, w, cid in soft:
            if not _holds(rel, rank[x], rank[y]):
                ids.append(cid)
                weight += w
                if len(ids) > inst.k:
                    break
        if len(ids) > inst.k or weight > inst.W:
            continue
        key = (len(ids), weight, tuple(ids))
        if best_key is None or key < best_key:
            best_key, best_rank = key, rank
    if best_key is None:
        return None
    return (Solution(frozenset(best_key[2]), best_key[0], best_key[1]),
            {v: best_rank[i] for v, i in pos.items()})


def _holds(rel, a, b) -> bool:
    if rel is LT:
        return a < b
    if rel is LEQ:
        return a <= b
    if rel is EQ:
        return a == b
    return a != b


def brute_force_graph(gp: GraphProblem) -> Solution | None:
    """Optimal (cost, weight, lexicographic) deletion set for any of the four
    graph problems, by subset enumeration in increasing size."""
    objs = gp.objects()
    deletable = gp.deletable()
    if len(deletable) > MAX_GRAPH_OBJECTS:
        raise GuardExceeded(f"graph oracle handles at most {MAX_GRAPH_OBJECTS} deletable objects")
    for size in range(min(gp.k, len(deletable)) + 1):
        best = None
        for subset in combinations(deletable, size):
            weight = sum(objs[i].weight for i in subset)
            if weight > gp.W:
                continue
            key = (weight, subset)
            if best is not None and key >= best:
                continue
            if graph_is_feasible(gp, subset):
                best = key
        if best is not None:
            return Solution(frozenset(best[1]), size, best[0])
    return None


def _dsmc_arrays(gp: GraphProblem):
    pos = {v: i for i, v in enumerate(gp.vertices)}
    n = len(pos)
    order = sorted(range(len(gp.arcs)), key=lambda a: pos[gp.arcs[a].u])
    adj_start = np.zeros(n + 1, dtype=np.int64)
    for a in gp.arcs:
        adj_start[pos[a.u] + 1] += 1
    adj_start = np.cumsum(adj_start)
    adj_to = np.array([pos[gp.arcs[a].v] for a in order], dtype=np.int64)
    adj_arc = np.array(order, dtype=np.int64)
    return pos, n, adj_start, adj_to, adj_arc


def brute_force_dsmc(gp: GraphProblem) -> frozenset[int] | None:
    """Minimum-cardinality DSMC solution; among those the lexicographically first.

    Subsets of deletable objects (arcs and soft requests) are tried in
    increasing size.  Feasibility is upward closed, so with no weight budget
    the minimum size is located by bisection over sizes; the returned set is
    the same one a plain increasing-size scan would report.
    """
    if gp.kind is not ProblemKind.DSMC:
        raise ValueError("brute_force_dsmc needs a DSMC instance")
    from ._dsmc_kernel import search_size

    deletable = gp.deletable()
    if len(deletable) > MAX_DSMC_OBJECTS or gp.k > MAX_DSMC_BUDGET:
        raise GuardExceeded(
            f"DSMC oracle handles at most {MAX_DSMC_OBJECTS} deletable objects and budget "
            f"{MAX_DSMC_BUDGET}; got {len(deletable)} and {gp.k}"
        )
    pos, n, adj_start, adj_to, adj_arc = _dsmc_arrays(gp)
    arc_index = {a.id: i for i, a in enumerate(gp.arcs)}
    req_index = {r.id: i for i, r in enumerate(gp.requests)}
    objs = gp.objects()
    obj_is_arc = np.array([i in arc_index for i in deletable], dtype=np.bool_)
    obj_ref = np.array([arc_index.get(i, req_index.get(i)) for i in deletable], dtype=np.int64)
    obj_weight = np.array([objs[i].weight for i in deletable], dtype=np.int64)
    req_s = np.array([pos[r.s] for r in gp.requests], dtype=np.int64)
    req_t = np.array([pos[r.t] for r in gp.requests], dtype=np.int64)
    cap = np.iinfo(np.int64).max if gp.W == INF else int(gp.W)

    def attempt(size):
        out = search_size(size, n, adj_start, adj_to, adj_arc, len(gp.arcs), obj_is_arc,
                          obj_ref, obj_weight, cap, req_s, req_t)
        if size == 0:
            return frozenset() if out[0] == -2 else None
        if out[0] < 0:
            return None
        return frozenset(deletable[j] for j in out)

    top = min(gp.k, len(deletable))
    if gp.W != INF:
        for size in range(top + 1):
            found = attempt(size)
            if found is not None:
                return found
        return None
    found = attempt(top)
    if found is None:
        return None
    lo, hi = 0, top
    while lo < hi:
        mid = (lo + hi) // 2
        hit = attempt(mid)
        if hit is None:
            lo = mid + 1
        else:
            hi, found = mid, hit
    return found if len(found) == lo else attempt(lo)


def brute_force_multicolored_clique(g: CliqueInstance) -> frozenset[str] | None:
    if g.n ** g.k > MAX_CLIQUE_SELECTIONS:
        raise GuardExceeded(f"n^k = {g.n ** g.k} exceeds {MAX_CLIQUE_SELECTIONS}")
    for pick in product(*g.parts):
        if all(g.adjacent(u, v) for u, v in combinations(pick, 2)):
            return frozenset(pick)
    return None


def fubini(n: int) -> int:
    """Number of weak orders on ``n`` items (ordered Bell number)."""
    return sum(
        (-1) ** (j) * math.comb(kk, j) * (kk - j) ** n
        for kk in range(n + 1)
        for j in range(kk + 1)
    ) if n else 1


def compressed_tradeoffs(ci) -> set[tuple[int, int]]:
    """(cost, weight) of every violated soft set over weak orders that respect
    the crisp constraints and put ``U`` in strictly increasing order."""
    base = ci.base
    n = len(base.variables)
    if n > MAX_ORACLE_VARIABLES:
        raise GuardExceeded(f"oracle handles at most {MAX_ORACLE_VARIABLES} variables, got {n}")
    pos = {v: i for i, v in enumerate(base.variables)}
    chain = [(pos[a], pos[b]) for a, b in zip(ci.U, ci.U[1:])]
    out = set()
    for rank in all_weak_orders(n):
        if any(rank[a] >= rank[b] for a, b in chain):
            continue
        cost = weight = 0
        for c in base.constraints:
            if not _holds(c.rel, rank[pos[c.x]], rank[pos[c.y]]):
                if not c.soft:
                    break
                cost += 1
                weight += c.weight
        else:
            out.add((cost, weight))
    return out


def boolean_tradeoffs(bi, max_cost: int) -> set[tuple[int, int]]:
    """(cost, weight) of every soft deletion set of size at most ``max_cost``
    after which the remaining 2-clauses are satisfiable."""
    soft = sorted((bc for bc in bi.constraints if bc.soft), key=lambda b: b.id)
    crisp = [cl for bc in bi.constraints if not bc.soft for cl in bc.clauses]
    out = set()
    for size in range(min(max_cost, len(soft)) + 1):
        for chosen in combinations(soft, size):
            gone = {bc.id for bc in chosen}
            clauses = crisp + [cl for bc in soft if bc.id not in gone for cl in bc.clauses]
            if propagation_2sat(len(bi.variables), clauses):
                out.add((size, sum(bc.weight for bc in chosen)))
    return out


def _as_literals(clause):
    """Clause as two (variable, polarity) literals."""
    shape, a, b = clause
    return {
        "T>": ((a, True), (a, True)),
        ">F": ((a, False), (a, False)),
        ">": ((a, False), (b, True)),
        "|": ((a, True), (b, True)),
        "!|": ((a, False), (b, False)),
    }[shape]


def propagation_2sat(nv: int, clauses) -> bool:
    """2-SAT by tentative assignment and unit propagation.

    Setting a variable and propagating either succeeds, in which case the
    touched clauses are all satisfied and the choice is safe, or fails, in
    which case the opposite value is forced.  No implication graph involved.
    """
    lits = [_as_literals(cl) for cl in clauses]
    watch: list[list[int]] = [[] for _ in range(nv)]
    for i, ((a, _), (b, _)) in enumerate(lits):
        watch[a].append(i)
        if b != a:
            watch[b].append(i)
    value: list[bool | None] = [None] * nv

    def propagate(var, val, trail):
        stack = [(var, val)]
        while stack:
            v, t = stack.pop()
            if value[v] is not None:
                if value[v] != t:
                    return False
                continue
            value[v] = t
            trail.append(v)
            for i in watch[v]:
                (a, pa), (b, pb) = lits[i]
                va = None if value[a] is None else value[a] == pa
                vb = None if value[b] is None else value[b] == pb
                if va or vb:
                    continue
                if va is False and vb is False:
                    return False
                stack.append((b, pb) if va is False else (a, pa))
        return True

    units = [l for l in lits if l[0] == l[1]]
    trail: list[int] = []
    for (a, pa), _ in units:
        if not propagate(a, pa, trail):
            return False
    for v in range(nv):
        if value[v] is not None:
            continue
        trail = []
        if propagate(v, True, trail):
            continue
        for x in trail:
            value[x] = None
        if not propagate(v, False, []):
            return False
    return True


def truth_table_2sat(clauses) -> bool:
    """Satisfiability of 2-clauses over hashable names by full enumeration."""
    names = sorted({v for _, a, b in clauses for v in (a, b)}, key=repr)
    index = {v: i for i, v in enumerate(names)}
    local = [(s, index[a], index[b]) for s, a, b in clauses]
    return any(all(_clause_true(cl, m) for cl in local)
               for m in product((False, True), repeat=len(names)))


def _clause_true(clause, m) -> bool:
    (a, pa), (b, pb) = _as_literals(clause)
    return m[a] == pa or m[b] == pb
