"""Compressed instances and their bijunctive Boolean encoding.

For every source variable ``v`` and distinguished variables ``u_1 < ... < u_l``:

* ``c[v,i]`` (``1 <= i <= l``) says ``v`` sits exactly at ``u_i``;
* ``p[v,j]`` (``1 <= j <= 2l+1``) is a threshold vector: ``p[v,2i]`` means
  ``v >= u_i`` and ``p[v,2i+1]`` means ``v > u_i``; ``p[v,1]`` is always 1.

Crisp structure clauses tie these together; every source constraint becomes
one soft Boolean constraint whose clause set also repeats the structure
clauses over its first variable, so that its Gaifman graph is a clique plus
pendant edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

from ..model import EQ, INF, LT, NEQ, Instance, Solution, evaluate, ranks_from_values
from ..satisfiability import check_satisfiable

# clause shapes; every clause is (shape, a, b) over Boolean variable indices
TRUE = "T>"     # (1 -> a)
FALSE = ">F"    # (a -> 0)
IMP = ">"       # (a -> b)
OR = "|"        # (a v b)
NAND = "!|"     # (!a v !b)

SHAPES = (TRUE, FALSE, IMP, OR, NAND)


class BooleanVarId(NamedTuple):
    kind: str       # "c" or "p"
    v: str
    index: int

    def __str__(self) -> str:
        return f"{self.kind}.{self.v}.{self.index}"


@dataclass(frozen=True)
class BooleanConstraint:
    id: int
    scope: tuple[int, ...]
    clauses: tuple[tuple[str, int, int], ...]
    soft: bool
    weight: int
    source: int | None
    family: str

    @property
    def arity(self) -> int:
        return len(self.scope)


@dataclass(frozen=True)
class BooleanInstance:
    variables: tuple[BooleanVarId, ...]
    constraints: tuple[BooleanConstraint, ...]
    k: int
    W: int | float = INF


@dataclass(frozen=True)
class CompressedInstance:
    """An instance over {<, =, !=} plus distinguished variables ``U`` in strictly
    increasing order (the list order is the injective partial assignment).

    Only the constraints among variables outside ``U`` must be jointly
    satisfiable; they supply the fractional offsets when lifting.  (A fully
    satisfiable base, the usual promise, implies this.)
    """

    base: Instance
    U: tuple[str, ...]
    k: int
    W: int | float = INF

    def __post_init__(self):
        if not self.base.relations <= {LT, EQ, NEQ}:
            raise ValueError("compressed instances use only <, =, !=")
        if len(set(self.U)) != len(self.U) or not set(self.U) <= set(self.base.variables):
            raise ValueError("U must list distinct base variables")
        for c in self.base.constraints:
            if c.is_self_loop and c.rel is not EQ:
                raise ValueError(f"unresolved self-loop {c}")

    @property
    def ell(self) -> int:
        return len(self.U)

    def alpha(self) -> dict[str, int]:
        return {u: i for i, u in enumerate(self.U, start=1)}

    def outside(self) -> Instance:
        """Constraints with no endpoint in ``U``."""
        inside = set(self.U)
        return Instance(
            tuple(v for v in self.base.variables if v not in inside),
            tuple(c for c in self.base.constraints if c.x not in inside and c.y not in inside),
            self.base.k, self.base.W,
        )


@dataclass
class Encoding:
    """Bookkeeping that ties Boolean variables and constraints back to the source."""

    ell: int
    variables: tuple[str, ...]
    U: tuple[str, ...]
    offset: dict[str, int]
    source: dict[int, int] = field(default_factory=dict)

    def c(self, v: str, i: int) -> int:
        return self.offset[v] + i - 1

    def p(self, v: str, j: int) -> int:
        return self.offset[v] + self.ell + j - 1


def _constraint(cid, clauses, soft, weight, source, family) -> BooleanConstraint:
    scope = sorted({a for _, a, _ in clauses} | {b for _, _, b in clauses})
    return BooleanConstraint(cid, tuple(scope), tuple(clauses), soft, weight, source, family)


def booleanize(ci: CompressedInstance) -> tuple[BooleanInstance, Encoding]:
    ell = ci.ell
    width = 3 * ell + 1
    offset = {v: n * width for n, v in enumerate(ci.base.variables)}
    enc = Encoding(ell, ci.base.variables, ci.U, offset)
    c, p = enc.c, enc.p
    bvars = []
    for v in ci.base.variables:
        bvars += [BooleanVarId("c", v, i) for i in range(1, ell + 1)]
        bvars += [BooleanVarId("p", v, j) for j in range(1, 2 * ell + 2)]

    out: list[BooleanConstraint] = []

    def crisp(clause, family):
        out.append(_constraint(len(out), [clause], False, 1, None, family))

    top = 2 * ell + 1
    for v in ci.base.variables:
        for i, i2 in combinations(range(1, ell + 1), 2):
            crisp((NAND, c(v, i), c(v, i2)), "at-most-one")
    for i, u in enumerate(ci.U, start=1):
        crisp((TRUE, c(u, i), c(u, i)), "anchor-c")
    for v in ci.base.variables:
        crisp((TRUE, p(v, 1), p(v, 1)), "chain")
        for j, j2 in combinations(range(1, top + 1), 2):
            crisp((IMP, p(v, j2), p(v, j)), "chain")
    for i, u in enumerate(ci.U, start=1):
        crisp((TRUE, p(u, 2 * i), p(u, 2 * i)), "anchor-p")
        crisp((FALSE, p(u, 2 * i + 1), p(u, 2 * i + 1)), "anchor-p")
    for v in ci.base.variables:
        for i in range(1, ell + 1):
            for j in range(1, top + 1):
                if j <= 2 * i:
                    crisp((IMP, c(v, i), p(v, j)), "c-implies-p")
                else:
                    crisp((NAND, c(v, i), p(v, j)), "c-implies-p")

    for src in sorted(ci.base.constraints, key=lambda s: s.id):
        v, w = src.x, src.y
        at_most_one = [(NAND, c(v, i), c(v, i2)) for i, i2 in combinations(range(1, ell + 1), 2)]
        chain = [(IMP, p(v, j2), p(v, j)) for j, j2 in combinations(range(1, top + 1), 2)]
        if src.rel is EQ:
            clauses = []
            for i in range(1, ell + 1):
                clauses += [(IMP, c(v, i), c(w, i)), (IMP, c(w, i), c(v, i))]
            clauses += at_most_one
            for j in range(1, top + 1):
                clauses += [(IMP, p(v, j), p(w, j)), (IMP, p(w, j), p(v, j))]
            clauses += chain
            for i in range(1, ell + 1):
                clauses += [(IMP, c(v, i), p(v, j)) for j in range(1, 2 * i + 1)]
                clauses += [(NAND, c(v, i), p(v, j)) for j in range(2 * i + 1, top + 1)]
            family = "eq"
        elif src.rel is NEQ:
            clauses = [(NAND, c(v, i), c(w, i)) for i in range(1, ell + 1)] + at_most_one
            family = "neq"
        else:
            clauses = [(IMP, p(v, 2 * i - 1), p(w, 2 * i - 1)) for i in range(1, ell + 1)]
            clauses += [(IMP, p(v, 2 * i), p(w, 2 * i + 1)) for i in range(1, ell + 1)]
            clauses += chain
            family = "lt"
        bc = _constraint(len(out), clauses, src.soft, src.weight, src.id, family)
        enc.source[bc.id] = src.id
        out.append(bc)
    return BooleanInstance(tuple(bvars), tuple(out), ci.k, ci.W), enc


def check_bijunctive_2k2_free(bc: BooleanConstraint) -> bool:
    """Is the Gaifman graph of the clause set free of an induced 2K2?"""
    adj: dict[int, set[int]] = {v: set() for v in bc.scope}
    for _, a, b in bc.clauses:
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    edges = [(a, b) for a in adj for b in adj[a] if a < b]
    for (a, b), (x, y) in combinations(edges, 2):
        if len({a, b, x, y}) < 4:
            continue
        if not ({x, y} & (adj[a] | adj[b])):
            return False
    return True


def clause_holds(clause, beta) -> bool:
    shape, a, b = clause
    if shape == TRUE:
        return bool(beta[a])
    if shape == FALSE:
        return not beta[a]
    if shape == IMP:
        return (not beta[a]) or bool(beta[b])
    if shape == OR:
        return bool(beta[a]) or bool(beta[b])
    return not (beta[a] and beta[b])


class LiftError(AssertionError):
    """The lifted assignment broke a kept constraint or disagreed with ``U``."""


def lift_solution(bi: BooleanInstance, beta, deleted, ci: CompressedInstance, enc: Encoding):
    """Turn a Boolean solution into a rational assignment of the compressed instance.

    Variables pinned to some ``u_i`` get value ``i``; every other variable gets
    ``iota(v) + gamma(v)`` where ``iota(v)`` is the largest ``i`` with
    ``p[v,2i] = 1`` (0 if none) and ``gamma`` is a satisfying assignment of the
    constraints outside ``U`` rescaled into (0, 1).

    Returns ``(Solution, ranks, values)`` with ``values`` exact fractions.
    """
    X = frozenset(enc.source[b] for b in deleted)
    gamma_ranks = check_satisfiable(ci.outside())
    if gamma_ranks is None:
        raise LiftError("constraints outside U are unsatisfiable")
    levels = len(set(gamma_ranks.values()))
    values: dict[str, Fraction] = {}
    for v in ci.base.variables:
        pinned = [i for i in range(1, enc.ell + 1) if beta[enc.c(v, i)]]
        if pinned:
            values[v] = Fraction(pinned[0])
            continue
        iota = max((i for i in range(1, enc.ell + 1) if beta[enc.p(v, 2 * i)]), default=0)
        values[v] = iota + Fraction(gamma_ranks[v] + 1, levels + 1)
    ranks = ranks_from_values(values)
    report = evaluate(ci.base, ranks)
    if not set(report.violated) <= X:
        raise LiftError(f"lifted assignment breaks {sorted(set(report.violated) - X)} outside X")
    if any(values[u] != i for i, u in enumerate(ci.U, start=1)):
        raise LiftError("lifted assignment disagrees with the order on U")
    return Solution.of(ci.base, X), ranks, values


def dump_boolean_instance(bi: BooleanInstance) -> str:
    """Line format: ``bvar`` declarations then ``bcons <soft|crisp> <weight> <source|-> : clauses``."""
    names = [str(v) for v in bi.variables]
    lines = [f"k {bi.k}"]
    if bi.W != INF:
        lines.append(f"w {int(bi.W)}")
    lines += [f"bvar {v.kind} {v.v} {v.index}" for v in bi.variables]
    for bc in bi.constraints:
        toks = []
        for shape, a, b in bc.clauses:
            if shape == TRUE:
                toks.append(f"T>{names[a]}")
            elif shape == FALSE:
                toks.append(f"{names[a]}>F")
            elif shape == IMP:
                toks.append(f"{names[a]}>{names[b]}")
            elif shape == OR:
                toks.append(f"{names[a]}|{names[b]}")
            else:
                toks.append(f"!{names[a]}|!{names[b]}")
        src = "-" if bc.source is None else str(bc.source)
        tag = "soft" if bc.soft else "crisp"
        lines.append(f"bcons {tag} {bc.weight} {src} : " + " ".join(toks))
    return "\n".join(lines) + "\n"
