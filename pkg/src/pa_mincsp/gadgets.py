"""Multicolored Clique -> Directed Symmetric Multicut reduction.

Naming scheme (stable across runs):

* ``nk<i>.c<p>``        junction ``c_p`` of necklace ``i`` (``p`` 0-based, ``0 <= p < 3kn``)
* ``nk<i>.s<j>.d<t>.n`` / ``.s``   north / south vertex of diamond ``t`` (1-based) of string ``j``
* ``cg<i>.<j>.<a>.<b>.s`` / ``.t`` the two coordination vertices for the non-adjacent
  pair ``v^i_a``, ``v^j_b`` with ``i < j``

Diamond ``t`` of string ``j`` in necklace ``i`` has western junction
``c_{(j-1)*3n + (t-1)}`` and eastern junction ``c_{(j-1)*3n + t}`` (mod ``3kn``).
Parts, strings and vertex indices are 1-based as in the usual statement of
the construction; necklace junctions are 0-based.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

from .graphs import Arc, GraphProblem, ProblemKind, Request, scc_labels
from .model import FormatError, _tokens, check_name


@dataclass(frozen=True)
class CliqueInstance:
    k: int
    parts: tuple[tuple[str, ...], ...]
    edges: frozenset[frozenset[str]]

    def __post_init__(self):
        if len(self.parts) != self.k:
            raise ValueError(f"expected {self.k} parts, got {len(self.parts)}")
        sizes = {len(p) for p in self.parts}
        if len(sizes) > 1:
            raise ValueError("all parts must have the same size")
        names = [v for p in self.parts for v in p]
        if len(set(names)) != len(names):
            raise ValueError("parts must be disjoint")
        known = set(names)
        for e in self.edges:
            if len(e) != 2 or not e <= known:
                raise ValueError(f"bad edge {sorted(e)}")

    @property
    def n(self) -> int:
        return len(self.parts[0]) if self.parts else 0

    def part_of(self) -> dict[str, tuple[int, int]]:
        """vertex name -> (part, index), both 1-based."""
        return {v: (i + 1, a + 1) for i, p in enumerate(self.parts) for a, v in enumerate(p)}

    def adjacent(self, u: str, v: str) -> bool:
        return frozenset((u, v)) in self.edges

    @classmethod
    def build(cls, parts, edges) -> "CliqueInstance":
        parts = tuple(tuple(p) for p in parts)
        return cls(len(parts), parts, frozenset(frozenset(e) for e in edges))


def parse_clique(text: str) -> CliqueInstance:
    k = None
    parts: dict[int, tuple[str, ...]] = {}
    edges = []
    for lineno, toks in _tokens(text):
        head = toks[0]
        if head == "k":
            if k is not None:
                raise FormatError(lineno, "duplicate k line")
            try:
                k = int(toks[1])
            except (IndexError, ValueError):
                raise FormatError(lineno, "bad k line") from None
        elif head == "part":
            try:
                i = int(toks[1])
            except (IndexError, ValueError):
                raise FormatError(lineno, "bad part index") from None
            if i in parts:
                raise FormatError(lineno, f"duplicate part {i}")
            parts[i] = tuple(check_name(lineno, t) for t in toks[2:])
        elif head == "edge":
            if len(toks) != 3:
                raise FormatError(lineno, "expected 'edge <u> <v>'")
            edges.append((check_name(lineno, toks[1]), check_name(lineno, toks[2])))
        else:
            raise FormatError(lineno, f"unknown line type {head!r}")
    if k is None:
        raise FormatError(0, "missing k line")
    if sorted(parts) != list(range(1, k + 1)):
        raise FormatError(0, f"expected parts 1..{k}")
    try:
        return CliqueInstance.build([parts[i] for i in range(1, k + 1)], edges)
    except ValueError as exc:
        raise FormatError(0, str(exc)) from None


def serialize_clique(g: CliqueInstance) -> str:
    lines = [f"k {g.k}"]
    lines += [f"part {i} " + " ".join(p) for i, p in enumerate(g.parts, start=1)]
    pos = g.part_of()
    for e in sorted(g.edges, key=lambda e: sorted(pos[v] for v in e)):
        u, v = sorted(e, key=pos.get)
        lines.append(f"edge {u} {v}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Diamond:
    w: str
    n: str
    e: str
    s: str
    ns_arc: int


@dataclass(frozen=True)
class Coordination:
    i: int
    j: int
    alpha: int
    beta: int
    s: str
    t: str
    crossing: tuple[int, int, int, int]
    request: int


@dataclass
class GadgetMap:
    k: int
    n: int
    # diamonds[(i, j)] lists the 3n diamonds of string S^i_j in order
    diamonds: dict[tuple[int, int], list[Diamond]] = field(default_factory=dict)
    junctions: dict[int, list[str]] = field(default_factory=dict)
    coordination: list[Coordination] = field(default_factory=list)
    # ns-arc id -> (part i, string j, 1-based position t)
    picks: dict[int, tuple[int, int, int]] = field(default_factory=dict)
    necklace_requests: dict[int, list[int]] = field(default_factory=dict)
    vertex_names: dict[tuple[int, int], str] = field(default_factory=dict)

    def string_junctions(self, i: int, j: int) -> list[str]:
        """``x^{i,j}_0 .. x^{i,j}_{3n-1}``: western junctions of the string's diamonds."""
        return [d.w for d in self.diamonds[(i, j)]]

    def ns_arc(self, i: int, j: int, t: int) -> int:
        return self.diamonds[(i, j)][t - 1].ns_arc

    def to_json(self) -> str:
        return json.dumps({
            "k": self.k,
            "n": self.n,
            "vertices": {f"{i}.{a}": name for (i, a), name in sorted(self.vertex_names.items())},
            "diamonds": {
                f"{i}.{j}": [[d.w, d.n, d.e, d.s, d.ns_arc] for d in ds]
                for (i, j), ds in sorted(self.diamonds.items())
            },
            "junctions": {str(i): js for i, js in sorted(self.junctions.items())},
            "necklace_requests": {str(i): rs for i, rs in sorted(self.necklace_requests.items())},
            "coordination": [
                {"i": c.i, "j": c.j, "alpha": c.alpha, "beta": c.beta, "s": c.s, "t": c.t,
                 "crossing": list(c.crossing), "request": c.request}
                for c in self.coordination
            ],
        }, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "GadgetMap":
        raw = json.loads(text)
        m = cls(raw["k"], raw["n"])
        for key, name in raw["vertices"].items():
            i, a = map(int, key.split("."))
            m.vertex_names[(i, a)] = name
        for key, ds in raw["diamonds"].items():
            i, j = map(int, key.split("."))
            m.diamonds[(i, j)] = [Diamond(*d) for d in ds]
            for t, d in enumerate(m.diamonds[(i, j)], start=1):
                m.picks[d.ns_arc] = (i, j, t)
        m.junctions = {int(i): js for i, js in raw["junctions"].items()}
        m.necklace_requests = {int(i): rs for i, rs in raw["necklace_requests"].items()}
        m.coordination = [
            Coordination(c["i"], c["j"], c["alpha"], c["beta"], c["s"], c["t"],
                         tuple(c["crossing"]), c["request"])
            for c in raw["coordination"]
        ]
        return m


def build_dsmc_from_clique(g: CliqueInstance) -> tuple[GraphProblem, GadgetMap]:
    k, n = g.k, g.n
    if k < 2 or n < 1:
        raise ValueError("the construction needs k >= 2 and n >= 1")
    length = 3 * k * n
    vertices: list[str] = []
    arcs: list[Arc] = []
    requests: list[Request] = []
    ids = iter(range(10**9))
    m = GadgetMap(k, n)
    m.vertex_names = {(i, a): g.parts[i - 1][a - 1] for i in range(1, k + 1) for a in range(1, n + 1)}

    def arc(u, v, soft=False):
        a = Arc(next(ids), u, v, soft)
        arcs.append(a)
        return a.id

    for i in range(1, k + 1):
        junction = [f"nk{i}.c{p}" for p in range(length)]
        m.junctions[i] = junction
        vertices.extend(junction)
        for j in range(1, k + 1):
            string = []
            for t in range(1, 3 * n + 1):
                p = (j - 1) * 3 * n + (t - 1)
                w, e = junction[p], junction[(p + 1) % length]
                north, south = f"nk{i}.s{j}.d{t}.n", f"nk{i}.s{j}.d{t}.s"
                vertices += [north, south]
                arc(south, w)
                arc(w, north)
                arc(south, e)
                arc(e, north)
                ns = arc(north, south, soft=True)
                string.append(Diamond(w, north, e, south, ns))
                m.picks[ns] = (i, j, t)
            m.diamonds[(i, j)] = string
        reqs = []
        for alpha in range(length):
            r = Request(next(ids), junction[alpha], junction[(alpha + n) % length], soft=False)
            requests.append(r)
            reqs.append(r.id)
        m.necklace_requests[i] = reqs

    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            x = m.string_junctions(i, j)
            y = m.string_junctions(j, i)
            for alpha, beta in product(range(1, n + 1), repeat=2):
                if g.adjacent(g.parts[i - 1][alpha - 1], g.parts[j - 1][beta - 1]):
                    continue
                s, t = f"cg{i}.{j}.{alpha}.{beta}.s", f"cg{i}.{j}.{alpha}.{beta}.t"
                vertices += [s, t]
                crossing = (
                    arc(x[n + alpha], s),
                    arc(s, y[2 * n + beta - 1]),
                    arc(y[n + beta], t),
                    arc(t, x[2 * n + alpha - 1]),
                )
                r = Request(next(ids), s, t, soft=False)
                requests.append(r)
                m.coordination.append(Coordination(i, j, alpha, beta, s, t, crossing, r.id))
    gp = GraphProblem(ProblemKind.DSMC, tuple(vertices), tuple(arcs), tuple(requests), 3 * k * k)
    return gp, m


def clique_to_cut(m: GadgetMap, Z) -> frozenset[int]:
    """Pick diamonds ``alpha``, ``alpha+n``, ``alpha+2n`` of every string of part ``i``
    for each chosen ``v^i_alpha``."""
    where = {name: key for key, name in m.vertex_names.items()}
    chosen: dict[int, int] = {}
    for v in Z:
        if v not in where:
            raise ValueError(f"unknown vertex {v!r}")
        i, alpha = where[v]
        if i in chosen:
            raise ValueError(f"two vertices chosen from part {i}")
        chosen[i] = alpha
    if sorted(chosen) != list(range(1, m.k + 1)):
        raise ValueError("Z must contain exactly one vertex per part")
    out = set()
    for i, alpha in chosen.items():
        for j in range(1, m.k + 1):
            for t in (alpha, alpha + m.n, alpha + 2 * m.n):
                out.add(m.ns_arc(i, j, t))
    return frozenset(out)


def picked_alphas(m: GadgetMap, X) -> dict[int, int] | None:
    """Per part, the ``alpha`` of an evenly spaced pick, or ``None`` if ``X`` is not
    exactly 3k evenly spaced diamonds on every necklace."""
    X = set(X)
    if not X <= set(m.picks):
        return None
    alphas = {}
    for i in range(1, m.k + 1):
        mine = {(j, t) for a in X if m.picks[a][0] == i for (_, j, t) in [m.picks[a]]}
        if len(mine) != 3 * m.k:
            return None
        firsts = {t for (j, t) in mine if j == 1 and t <= m.n}
        if len(firsts) != 1:
            return None
        alpha = firsts.pop()
        expected = {(j, t) for j in range(1, m.k + 1) for t in (alpha, alpha + m.n, alpha + 2 * m.n)}
        if mine != expected:
            return None
        alphas[i] = alpha
    return alphas


def cut_to_clique(m: GadgetMap, X) -> frozenset[str] | None:
    alphas = picked_alphas(m, X)
    if alphas is None:
        return None
    return frozenset(m.vertex_names[(i, a)] for i, a in alphas.items())


def verify_dsmc_solution(d: GraphProblem, X) -> bool:
    """True iff no surviving request pair is strongly connected in ``D - X``."""
    gone = set(X)
    objs = d.objects()
    if any(not objs[i].soft for i in gone):
        raise ValueError("X contains an undeletable object")
    comp = scc_labels(d.vertices, ((a.u, a.v) for a in d.arcs if a.id not in gone))
    return all(r.s != r.t and comp[r.s] != comp[r.t] for r in d.requests if r.id not in gone)


def junction_type(n: int, r: int) -> str:
    """Crossing-arc incidence a string junction ``x_r`` can have, by position."""
    if r <= n:
        return "none"
    if r < 2 * n:
        return "out"
    if r == 2 * n:
        return "both"
    return "in"


@dataclass
class Run:
    necklace: int
    junctions: list[str]
    positions: list[int]
    types: list[str]
    actual: list[str]

    @property
    def admits_in(self) -> bool:
        return any(t in ("in", "both") for t in self.types)

    @property
    def admits_out(self) -> bool:
        return any(t in ("out", "both") for t in self.types)


@dataclass
class RunReport:
    runs: dict[int, list[Run]]
    neighbours_separated: bool


def analyze_runs(m: GadgetMap, d: GraphProblem, X) -> RunReport:
    """Split every necklace at the picked diamonds and type the resulting runs."""
    if picked_alphas(m, X) is None:
        raise ValueError("X must pick exactly 3k evenly spaced diamonds per necklace")
    X = set(X)
    n, length = m.n, 3 * m.k * m.n
    kept_arcs = [(a.u, a.v) for a in d.arcs if a.id not in X]
    comp = scc_labels(d.vertices, kept_arcs)
    incoming: dict[str, bool] = {}
    outgoing: dict[str, bool] = {}
    for c in m.coordination:
        arcs = {a.id: a for a in d.arcs if a.id in c.crossing}
        for aid in c.crossing:
            a = arcs[aid]
            outgoing[a.u] = True
            incoming[a.v] = True
    runs: dict[int, list[Run]] = {}
    separated = True
    for i in range(1, m.k + 1):
        junction = m.junctions[i]
        picked = sorted(
            (j - 1) * 3 * n + (t - 1) for a in X for (pi, j, t) in [m.picks[a]] if pi == i
        )
        mine = []
        for a, p in enumerate(picked):
            q = picked[(a + 1) % len(picked)]
            span = (q - p) % length or length
            positions = [(p + 1 + off) % length for off in range(span)]
            names = [junction[pos] for pos in positions]
            types = [junction_type(n, pos % (3 * n)) for pos in positions]
            actual = [
                {(False, False): "none", (False, True): "out", (True, True): "both", (True, False): "in"}[
                    (incoming.get(v, False), outgoing.get(v, False))
                ]
                for v in names
            ]
            mine.append(Run(i, names, positions, types, actual))
        for a, run in enumerate(mine):
            nxt = mine[(a + 1) % len(mine)]
            if comp[run.junctions[0]] == comp[nxt.junctions[0]]:
                separated = False
            if len({comp[v] for v in run.junctions}) != 1:
                separated = False
        runs[i] = mine
    return RunReport(runs, separated)
