"""Point Algebra instances: relations, constraints, parsing and evaluation.

Assignments are weak orders stored as ``{variable: rank}`` dicts.  For the
four relations ``<, <=, =, !=`` only the induced order matters, so integer
ranks stand in for rational values everywhere outside of lifted output.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

INF = math.inf

Assignment = Mapping[str, int]

_NAME = re.compile(r"^[A-Za-z0-9_]+$")


class Relation(enum.Enum):
    LT = "lt"
    LEQ = "leq"
    EQ = "eq"
    NEQ = "neq"

    @property
    def symbol(self) -> str:
        return {"lt": "<", "leq": "<=", "eq": "=", "neq": "!="}[self.value]

    def holds(self, a, b) -> bool:
        if self is Relation.LT:
            return a < b
        if self is Relation.LEQ:
            return a <= b
        if self is Relation.EQ:
            return a == b
        return a != b


LT, LEQ, EQ, NEQ = Relation.LT, Relation.LEQ, Relation.EQ, Relation.NEQ


class LanguageClass(enum.IntEnum):
    """Complexity of MinCSP over a relation set; ordered by hardness."""

    POLY_TIME = 0
    FPT = 1
    W1_HARD = 2


@dataclass(frozen=True)
class Constraint:
    id: int
    x: str
    y: str
    rel: Relation
    soft: bool = True
    weight: int = 1

    def __post_init__(self):
        if self.soft and self.weight < 1:
            raise ValueError(f"soft constraint {self.id} needs a positive weight")

    @property
    def is_self_loop(self) -> bool:
        return self.x == self.y

    def __str__(self) -> str:
        tag = f"soft w={self.weight}" if self.soft else "crisp"
        return f"#{self.id}: {self.x} {self.rel.symbol} {self.y} ({tag})"


@dataclass(frozen=True)
class Instance:
    """A weighted MinCSP instance.

    ``W`` is ``INF`` when no weight budget applies.  Constraint ids are
    unique; instances produced by :func:`parse_instance` or :func:`make_instance`
    number them ``0..m-1`` in list order, while sub-instances built inside the
    solvers keep the ids of the instance they were cut from.
    """

    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    k: int
    W: int | float = INF

    def __post_init__(self):
        declared = set(self.variables)
        if len(declared) != len(self.variables):
            raise ValueError("duplicate variable")
        ids = set()
        for c in self.constraints:
            if c.x not in declared or c.y not in declared:
                raise ValueError(f"constraint {c.id} uses an undeclared variable")
            if c.id in ids:
                raise ValueError(f"duplicate constraint id {c.id}")
            ids.add(c.id)
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.W != INF and (int(self.W) != self.W or self.W < 1):
            raise ValueError("W must be a positive integer or INF")

    @property
    def relations(self) -> frozenset[Relation]:
        return frozenset(c.rel for c in self.constraints)

    def constraint(self, cid: int) -> Constraint:
        for c in self.constraints:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def by_id(self) -> dict[int, Constraint]:
        return {c.id: c for c in self.constraints}

    def subinstance(self, ids: Iterable[int], k: int | None = None, W=None) -> "Instance":
        """Keep only constraints whose id is in ``ids`` (variables are kept)."""
        keep = set(ids)
        return Instance(
            self.variables,
            tuple(c for c in self.constraints if c.id in keep),
            self.k if k is None else k,
            self.W if W is None else W,
        )

    def without(self, ids: Iterable[int]) -> "Instance":
        drop = set(ids)
        return self.subinstance(c.id for c in self.constraints if c.id not in drop)


@dataclass(frozen=True)
class Solution:
    deleted: frozenset[int]
    cost: int
    weight: int

    @classmethod
    def of(cls, inst: Instance, ids: Iterable[int]) -> "Solution":
        table = inst.by_id()
        ids = frozenset(ids)
        for i in ids:
            if not table[i].soft:
                raise ValueError(f"crisp constraint {i} cannot be deleted")
        return cls(ids, len(ids), sum(table[i].weight for i in ids))

    @property
    def key(self) -> tuple:
        """Tie-break order: cost, then weight, then the sorted id tuple."""
        return (self.cost, self.weight, tuple(sorted(self.deleted)))


@dataclass(frozen=True)
class Report:
    violated: tuple[int, ...]
    cost: int
    weight: int
    crisp_violation: bool


def make_instance(rows, k: int, W=INF) -> Instance:
    """Build an instance from ``(x, rel, y[, soft[, weight]])`` rows.

    ``rel`` may be a :class:`Relation`, its token (``"lt"``) or its symbol (``"<"``).
    """
    variables: dict[str, None] = {}
    constraints = []
    for cid, row in enumerate(rows):
        x, rel, y, *rest = row
        soft = rest[0] if rest else True
        weight = rest[1] if len(rest) > 1 else 1
        variables.setdefault(x)
        variables.setdefault(y)
        constraints.append(Constraint(cid, x, y, _as_relation(rel), soft, weight if soft else 1))
    return Instance(tuple(variables), tuple(constraints), k, W)


def _as_relation(rel) -> Relation:
    if isinstance(rel, Relation):
        return rel
    for r in Relation:
        if rel in (r.value, r.symbol) or (rel == "≤" and r is LEQ) or (rel == "≠" and r is NEQ):
            return r
    raise ValueError(f"unknown relation {rel!r}")


class GuardExceeded(RuntimeError):
    """An exhaustive routine was asked to go beyond its hard size limit."""


class FormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_weight_token(lineno: int, tok: str) -> int:
    try:
        w = int(tok)
    except ValueError:
        raise FormatError(lineno, f"bad weight {tok!r}") from None
    if w < 1:
        raise FormatError(lineno, f"nonpositive weight {w}")
    return w


def parse_budget_line(lineno: int, toks: list[str], seen: dict) -> None:
    """Handle ``k``/``w`` header lines shared by every text format."""
    key = toks[0]
    if key in seen:
        raise FormatError(lineno, f"duplicate {key} line")
    if len(toks) != 2:
        raise FormatError(lineno, f"{key} takes exactly one value")
    if key == "w" and toks[1] == "inf":
        seen[key] = INF
        return
    try:
        value = int(toks[1])
    except ValueError:
        raise FormatError(lineno, f"bad {key} value {toks[1]!r}") from None
    if key == "k" and value < 0:
        raise FormatError(lineno, "k must be nonnegative")
    if key == "w" and value < 1:
        raise FormatError(lineno, "w must be positive")
    seen[key] = value


def check_name(lineno: int, name: str) -> str:
    if not _NAME.match(name):
        raise FormatError(lineno, f"bad variable name {name!r}")
    return name


def parse_instance(text: str) -> Instance:
    budgets: dict = {}
    variables: dict[str, None] = {}
    constraints = []
    tokens = {r.value: r for r in Relation}
    for lineno, toks in _tokens(text):
        head = toks[0]
        if head in ("k", "w"):
            parse_budget_line(lineno, toks, budgets)
            continue
        if head not in tokens:
            raise FormatError(lineno, f"unknown relation token {head!r}")
        if len(toks) not in (4, 5):
            raise FormatError(lineno, "expected '<rel> <var> <var> <soft|crisp> [weight]'")
        x, y = check_name(lineno, toks[1]), check_name(lineno, toks[2])
        if toks[3] not in ("soft", "crisp"):
            raise FormatError(lineno, f"expected soft or crisp, got {toks[3]!r}")
        soft = toks[3] == "soft"
        weight = parse_weight_token(lineno, toks[4]) if len(toks) == 5 else 1
        variables.setdefault(x)
        variables.setdefault(y)
        constraints.append(Constraint(len(constraints), x, y, tokens[head], soft, weight if soft else 1))
    if "k" not in budgets:
        raise FormatError(0, "missing k line")
    return Instance(tuple(variables), tuple(constraints), budgets["k"], budgets.get("w", INF))


def serialize_instance(inst: Instance) -> str:
    lines = [f"k {inst.k}"]
    if inst.W != INF:
        lines.append(f"w {int(inst.W)}")
    for c in sorted(inst.constraints, key=lambda c: c.id):
        if c.soft:
            lines.append(f"{c.rel.value} {c.x} {c.y} soft {c.weight}")
        else:
            lines.append(f"{c.rel.value} {c.x} {c.y} crisp")
    return "\n".join(lines) + "\n"


def evaluate(inst: Instance, a: Assignment) -> Report:
    missing = [v for v in inst.variables if v not in a]
    if missing:
        raise ValueError(f"assignment misses variables {missing}")
    violated = []
    cost = weight = 0
    crisp = False
    for c in inst.constraints:
        if not c.rel.holds(a[c.x], a[c.y]):
            violated.append(c.id)
            if c.soft:
                cost += 1
                weight += c.weight
            else:
                crisp = True
    return Report(tuple(violated), cost, weight, crisp)


def normalize(inst: Instance) -> Instance:
    """Make every soft constraint heavier than ``W`` crisp."""
    if inst.W == INF:
        return inst
    changed = tuple(
        replace(c, soft=False, weight=1) if c.soft and c.weight > inst.W else c
        for c in inst.constraints
    )
    return replace(inst, constraints=changed)


def classify_language(rels: Iterable[Relation]) -> LanguageClass:
    rels = frozenset(rels)
    if rels <= {EQ, LEQ} or rels <= {NEQ}:
        return LanguageClass.POLY_TIME
    if {LEQ, NEQ} <= rels:
        return LanguageClass.W1_HARD
    return LanguageClass.FPT


def ranks_from_values(values: Mapping[str, object]) -> dict[str, int]:
    """Weak order (dense ranks from 0) induced by arbitrary comparable values."""
    order = {v: r for r, v in enumerate(sorted(set(values.values())))}
    return {x: order[val] for x, val in values.items()}
