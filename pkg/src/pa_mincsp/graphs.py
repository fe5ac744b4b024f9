"""Digraph helpers and the four cut/transversal problem shapes.

Graph problems share one object-id space: every arc/edge and every cut
request gets a distinct integer id (file order), so a solution is simply a
set of ids of deletable objects.
"""
from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .model import INF, FormatError, _tokens, check_name, parse_budget_line, parse_weight_token


def strongly_connected_components(n: int, adj: Sequence[Sequence[int]]) -> list[int]:
    """Iterative Tarjan on vertices ``0..n-1``.

    Returns ``comp`` with component numbers in reverse topological order of
    the condensation (sink components get the smallest numbers).
    """
    index = [-1] * n
    low = [0] * n
    onstack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            nbrs = adj[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack[w] = True
                    work.append((w, 0))
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def scc_labels(vertices: Sequence[Hashable], arcs: Iterable[tuple]) -> dict:
    """Map each vertex to a component number for a digraph given by name."""
    pos = {v: i for i, v in enumerate(vertices)}
    adj: list[list[int]] = [[] for _ in vertices]
    for u, v in arcs:
        adj[pos[u]].append(pos[v])
    comp = strongly_connected_components(len(vertices), adj)
    return {v: comp[i] for i, v in enumerate(vertices)}


def condensation_order(n: int, adj: Sequence[Sequence[int]], comp: list[int]) -> list[int]:
    """Topological order of components, smallest minimum-vertex first among ready ones.

    Returns ``rank`` indexed by component number.
    """
    ncomp = max(comp, default=-1) + 1
    min_vertex = [n] * ncomp
    for v in range(n):
        if v < min_vertex[comp[v]]:
            min_vertex[comp[v]] = v
    indeg = [0] * ncomp
    succ: list[set[int]] = [set() for _ in range(ncomp)]
    for v in range(n):
        for w in adj[v]:
            a, b = comp[v], comp[w]
            if a != b and b not in succ[a]:
                succ[a].add(b)
                indeg[b] += 1
    ready = [(min_vertex[c], c) for c in range(ncomp) if indeg[c] == 0]
    heapq.heapify(ready)
    rank = [0] * ncomp
    r = 0
    while ready:
        _, c = heapq.heappop(ready)
        rank[c] = r
        r += 1
        for d in succ[c]:
            indeg[d] -= 1
            if indeg[d] == 0:
                heapq.heappush(ready, (min_vertex[d], d))
    return rank


class ProblemKind(enum.Enum):
    DFAS = "dfas"
    EDGE_MULTICUT = "multicut"
    SUBSET_DFAS = "subset-dfas"
    DSMC = "dsmc"


@dataclass(frozen=True)
class Arc:
    """A directed arc, or an undirected edge for Edge Multicut."""

    id: int
    u: str
    v: str
    soft: bool = True
    weight: int = 1
    special: bool = False


@dataclass(frozen=True)
class Request:
    id: int
    s: str
    t: str
    soft: bool = False
    weight: int = 1


@dataclass(frozen=True)
class GraphProblem:
    kind: ProblemKind
    vertices: tuple[str, ...]
    arcs: tuple[Arc, ...]
    requests: tuple[Request, ...]
    k: int
    W: int | float = INF

    def __post_init__(self):
        vs = set(self.vertices)
        ids = set()
        for a in self.arcs:
            if a.u not in vs or a.v not in vs:
                raise ValueError(f"arc {a.id} uses an undeclared vertex")
            ids.add(a.id)
        for r in self.requests:
            if r.s not in vs or r.t not in vs:
                raise ValueError(f"request {r.id} uses an undeclared vertex")
            ids.add(r.id)
        if len(ids) != len(self.arcs) + len(self.requests):
            raise ValueError("object ids must be unique across arcs and requests")
        if self.kind is ProblemKind.DFAS and self.requests:
            raise ValueError("DFAS instances have no cut requests")
        if self.kind in (ProblemKind.DFAS, ProblemKind.EDGE_MULTICUT, ProblemKind.DSMC):
            if any(a.special for a in self.arcs):
                raise ValueError("special arcs only exist in Subset-DFAS")
        if self.kind is ProblemKind.SUBSET_DFAS and self.requests:
            raise ValueError("Subset-DFAS instances have no cut requests")

    def objects(self) -> dict[int, Arc | Request]:
        table: dict[int, Arc | Request] = {a.id: a for a in self.arcs}
        table.update((r.id, r) for r in self.requests)
        return table

    def deletable(self) -> list[int]:
        return sorted(i for i, o in self.objects().items() if o.soft)


def graph_is_feasible(gp: GraphProblem, deleted: Iterable[int] = ()) -> bool:
    """Does deleting ``deleted`` solve the instance (ignoring budgets)?"""
    gone = set(deleted)
    arcs = [a for a in gp.arcs if a.id not in gone]
    if gp.kind is ProblemKind.EDGE_MULTICUT:
        parent = {v: v for v in gp.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a in arcs:
            parent[find(a.u)] = find(a.v)
        return all(find(r.s) != find(r.t) for r in gp.requests if r.id not in gone)
    comp = scc_labels(gp.vertices, ((a.u, a.v) for a in arcs))
    if gp.kind is ProblemKind.DFAS:
        return all(a.u != a.v and comp[a.u] != comp[a.v] for a in arcs)
    if gp.kind is ProblemKind.SUBSET_DFAS:
        return all(a.u != a.v and comp[a.u] != comp[a.v] for a in arcs if a.special)
    return all(r.s != r.t and comp[r.s] != comp[r.t] for r in gp.requests if r.id not in gone)


_ARC_WORD = {
    ProblemKind.DFAS: "arc",
    ProblemKind.SUBSET_DFAS: "arc",
    ProblemKind.DSMC: "arc",
    ProblemKind.EDGE_MULTICUT: "edge",
}


def parse_graph_problem(text: str, kind: ProblemKind | None = None) -> GraphProblem:
    """Parse the DFAS / Subset-DFAS / Multicut / DSMC line formats.

    Lines: ``kind <name>`` (optional), ``k``, ``w``, ``arc u v soft|crisp [weight] [special]``,
    ``edge u v soft|crisp [weight]`` and ``pair s t soft|crisp [weight]``.  Without a
    ``kind`` line the kind is inferred: edges mean Multicut, special arcs
    Subset-DFAS, pairs DSMC, otherwise DFAS.
    """
    budgets: dict = {}
    vertices: dict[str, None] = {}
    arcs: list[Arc] = []
    requests: list[Request] = []
    declared = kind
    saw = set()
    next_id = 0
    for lineno, toks in _tokens(text):
        head = toks[0]
        if head in ("k", "w"):
            parse_budget_line(lineno, toks, budgets)
            continue
        if head == "kind":
            if len(toks) != 2:
                raise FormatError(lineno, "kind takes one value")
            try:
                found = ProblemKind(toks[1])
            except ValueError:
                raise FormatError(lineno, f"unknown problem kind {toks[1]!r}") from None
            if declared is not None and declared is not found:
                raise FormatError(lineno, f"expected a {declared.value} instance")
            declared = found
            continue
        if head not in ("arc", "edge", "pair"):
            raise FormatError(lineno, f"unknown line type {head!r}")
        saw.add(head)
        rest = toks[1:]
        special = False
        if rest and rest[-1] == "special":
            if head != "arc":
                raise FormatError(lineno, "only arcs can be special")
            special = True
            saw.add("special")
            rest = rest[:-1]
        if len(rest) not in (3, 4):
            raise FormatError(lineno, f"expected '{head} <a> <b> <soft|crisp> [weight]'")
        a, b = check_name(lineno, rest[0]), check_name(lineno, rest[1])
        if rest[2] not in ("soft", "crisp"):
            raise FormatError(lineno, f"expected soft or crisp, got {rest[2]!r}")
        soft = rest[2] == "soft"
        weight = parse_weight_token(lineno, rest[3]) if len(rest) == 4 else 1
        weight = weight if soft else 1
        vertices.setdefault(a)
        vertices.setdefault(b)
        if head == "pair":
            requests.append(Request(next_id, a, b, soft, weight))
        else:
            arcs.append(Arc(next_id, a, b, soft, weight, special))
        next_id += 1
    if "k" not in budgets:
        raise FormatError(0, "missing k line")
    if declared is None:
        if "edge" in saw:
            declared = ProblemKind.EDGE_MULTICUT
        elif "special" in saw:
            declared = ProblemKind.SUBSET_DFAS
        elif "pair" in saw:
            declared = ProblemKind.DSMC
        else:
            declared = ProblemKind.DFAS
    if declared is ProblemKind.EDGE_MULTICUT and "arc" in saw:
        raise FormatError(0, "multicut instances use edge lines")
    if declared is not ProblemKind.EDGE_MULTICUT and "edge" in saw:
        raise FormatError(0, "edge lines only belong to multicut instances")
    try:
        return GraphProblem(declared, tuple(vertices), tuple(arcs), tuple(requests),
                            budgets["k"], budgets.get("w", INF))
    except ValueError as exc:
        raise FormatError(0, str(exc)) from None


def serialize_graph_problem(gp: GraphProblem) -> str:
    lines = [f"kind {gp.kind.value}", f"k {gp.k}"]
    if gp.W != INF:
        lines.append(f"w {int(gp.W)}")
    objs = sorted(list(gp.arcs) + list(gp.requests), key=lambda o: o.id)
    for o in objs:
        if isinstance(o, Arc):
            head, a, b = _ARC_WORD[gp.kind], o.u, o.v
        else:
            head, a, b = "pair", o.s, o.t
        line = f"{head} {a} {b} " + (f"soft {o.weight}" if o.soft else "crisp")
        if isinstance(o, Arc) and o.special:
            line += " special"
        lines.append(line)
    return "\n".join(lines) + "\n"
