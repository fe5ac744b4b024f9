"""Seeded random instances for tests, the bench harness and the CLI ``gen`` command."""
from __future__ import annotations

import random
from itertools import combinations

from .gadgets import CliqueInstance
from .graphs import Arc, GraphProblem, ProblemKind, Request
from .model import EQ, INF, LT, NEQ, Constraint, Instance, Relation, _as_relation
from .satisfiability import check_satisfiable


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def gen_random_instance(seed, nvars: int, nconstraints: int, relations, crisp_prob: float = 0.0,
                        max_weight: int = 1, k: int = 1, W=INF, self_loops: bool = False) -> Instance:
    """Uniform endpoints and relations; soft weights uniform in ``1..max_weight``."""
    if nvars < 1 or nconstraints < 0 or max_weight < 1:
        raise ValueError("nvars and max_weight must be positive")
    if nvars < 2 and not self_loops:
        raise ValueError("need two variables unless self-loops are allowed")
    rng = _rng(seed)
    rels = sorted((_as_relation(r) for r in relations), key=lambda r: r.value)
    if not rels:
        raise ValueError("empty relation set")
    names = tuple(f"v{i}" for i in range(nvars))
    out = []
    for cid in range(nconstraints):
        if self_loops:
            x, y = rng.choice(names), rng.choice(names)
        else:
            x, y = rng.sample(names, 2)
        rel = rng.choice(rels)
        soft = rng.random() >= crisp_prob
        weight = rng.randint(1, max_weight) if soft else 1
        out.append(Constraint(cid, x, y, rel, soft, weight))
    return Instance(names, tuple(out), k, W)


def gen_pipeline_case(seed) -> Instance:
    """One case of the pipeline-versus-oracle comparison: at most 6 variables,
    at most 10 soft and 3 crisp constraints over {<, =, !=}, k <= 3 and
    W either unbounded or at most 12."""
    rng = _rng(seed)
    nvars = rng.randint(2, 6)
    names = tuple(f"v{i}" for i in range(nvars))
    rows = [(True, rng.randint(1, 5)) for _ in range(rng.randint(1, 10))]
    rows += [(False, 1) for _ in range(rng.randint(0, 3))]
    rng.shuffle(rows)
    out = []
    for cid, (soft, weight) in enumerate(rows):
        x, y = rng.sample(names, 2)
        out.append(Constraint(cid, x, y, rng.choice((LT, EQ, NEQ)), soft, weight))
    W = INF if rng.random() < 0.5 else rng.randint(1, 12)
    return Instance(names, tuple(out), rng.randint(0, 3), W)


def gen_compressed_case(seed):
    """A satisfiable base over {<, =, !=} with at most 4 variables, a
    distinguished ordered set of at most 2 of them, and k <= 2."""
    from .fpt.encoding import CompressedInstance

    rng = _rng(seed)
    while True:
        nvars = rng.randint(2, 4)
        names = tuple(f"v{i}" for i in range(nvars))
        out = []
        for cid in range(rng.randint(1, 6)):
            x, y = rng.sample(names, 2)
            soft = rng.random() >= 0.2
            out.append(Constraint(cid, x, y, rng.choice((LT, EQ, NEQ)), soft,
                                  rng.randint(1, 4) if soft else 1))
        base = Instance(names, tuple(out), 0)
        if check_satisfiable(base) is None:
            continue
        ell = rng.randint(0, min(2, nvars))
        U = tuple(rng.sample(names, ell))
        k = rng.randint(0, 2)
        W = INF if rng.random() < 0.5 else rng.randint(1, 8)
        return CompressedInstance(Instance(names, tuple(out), k, W), U, k, W)


def gen_boolean_case(seed, nvars: int = 4, nconstraints: int = 5, k: int = 2):
    """Random bijunctive instance: each constraint holds one to three clauses."""
    from .fpt.encoding import SHAPES, BooleanInstance, BooleanVarId, _constraint

    rng = _rng(seed)
    variables = tuple(BooleanVarId("p", f"x{i}", 1) for i in range(nvars))
    out = []
    for cid in range(nconstraints):
        clauses = []
        for _ in range(rng.randint(1, 3)):
            shape = rng.choice(SHAPES)
            a, b = rng.randrange(nvars), rng.randrange(nvars)
            clauses.append((shape, a, a) if shape in ("T>", ">F") else (shape, a, b))
        soft = rng.random() >= 0.25
        out.append(_constraint(cid, clauses, soft, rng.randint(1, 4) if soft else 1,
                               cid if soft else None, "random"))
    W = INF if rng.random() < 0.5 else rng.randint(1, 8)
    return BooleanInstance(variables, tuple(out), k, W)


_IN_SCOPE = {
    ProblemKind.DFAS: (LT,),
    ProblemKind.EDGE_MULTICUT: (EQ, NEQ),
    ProblemKind.SUBSET_DFAS: (LT, Relation.LEQ),
    ProblemKind.DSMC: (Relation.LEQ, NEQ),
}


def gen_in_scope_instance(seed, kind: ProblemKind, max_vars: int = 6) -> Instance:
    """Random instance whose relations fit the graph encoding ``kind``."""
    rng = _rng(seed)
    nvars = rng.randint(2, max_vars)
    inst = gen_random_instance(rng, nvars, rng.randint(1, 8), _IN_SCOPE[kind],
                               crisp_prob=0.2, max_weight=4, k=rng.randint(0, 3),
                               W=INF if rng.random() < 0.5 else rng.randint(1, 10))
    return inst


def gen_dsmc(seed, nvertices: int = 5, narcs: int = 8, nrequests: int = 2, k: int = 3) -> GraphProblem:
    rng = _rng(seed)
    names = tuple(f"n{i}" for i in range(nvertices))
    arcs, reqs = [], []
    for i in range(narcs):
        u, v = rng.sample(names, 2)
        soft = rng.random() >= 0.2
        arcs.append(Arc(i, u, v, soft, rng.randint(1, 3) if soft else 1))
    for j in range(nrequests):
        s, t = rng.sample(names, 2)
        soft = rng.random() < 0.5
        reqs.append(Request(narcs + j, s, t, soft, rng.randint(1, 3) if soft else 1))
    return GraphProblem(ProblemKind.DSMC, names, tuple(arcs), tuple(reqs), k)


def gen_clique_instance(seed, k: int, n: int, edge_prob: float = 0.5) -> CliqueInstance:
    """``k`` parts of ``n`` vertices; each cross-part pair is an edge with ``edge_prob``."""
    rng = _rng(seed)
    parts = [[f"p{i}_{a}" for a in range(1, n + 1)] for i in range(1, k + 1)]
    edges = []
    for pi, pj in combinations(range(k), 2):
        for u in parts[pi]:
            for v in parts[pj]:
                if rng.random() < edge_prob:
                    edges.append((u, v))
    return CliqueInstance.build(parts, edges)


def clique_patterns_k2n2():
    """All 16 cross-edge patterns between two parts of two vertices."""
    parts = [["a1", "a2"], ["b1", "b2"]]
    cross = [(u, v) for u in parts[0] for v in parts[1]]
    for mask in range(16):
        yield mask, CliqueInstance.build(parts, [e for i, e in enumerate(cross) if mask >> i & 1])
