"""Bench harness: each suite is a list of independent seeded cases.

A case function takes ``(seed, index)`` and returns ``(ok, detail)``.  Cases
run in order in a single process unless ``PA_MINCSP_THREAD_LIMIT`` allows
more workers and deterministic mode is off; results are always reported in
case order.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .model import INF, evaluate, normalize

SUITES = ("pipeline-vs-oracle", "boolean-vs-subsets", "reductions-roundtrip", "gadget-k2n2")
DEFAULT_COUNTS = {
    "pipeline-vs-oracle": 500,
    "boolean-vs-subsets": 200,
    "reductions-roundtrip": 300,
    "gadget-k2n2": 16,
}
REDUCTION_NAMES = ("dfas", "multicut", "subset-dfas", "dsmc", "eq-as-leq", "lt-as-leq-neq")


def case_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def pipeline_case(seed: int, index: int):
    from .fpt import solve
    from .generate import gen_pipeline_case
    from .oracle import brute_force_mincsp

    inst = gen_pipeline_case(case_seed(seed, index))
    got = solve(inst)
    want = brute_force_mincsp(normalize(inst))
    if (got is None) != (want is None):
        return False, f"pipeline {got and got[0].key} vs oracle {want and want[0].key}"
    if got is None:
        return True, "infeasible on both sides"
    sol, ranks = got
    broken = set(evaluate(inst, ranks).violated)
    same = (sol.cost, sol.weight) == (want[0].cost, want[0].weight)
    ok = same and broken <= sol.deleted
    return ok, f"cost={sol.cost} weight={sol.weight} oracle=({want[0].cost},{want[0].weight})"


def boolean_case(seed: int, index: int):
    """Compressed and Boolean sides give the same yes/no at every budget pair,
    and the branch-and-bound solver hits the Boolean optimum."""
    from .fpt import booleanize, solve_boolean_mincsp
    from .generate import gen_compressed_case
    from .oracle import boolean_tradeoffs, compressed_tradeoffs

    ci = gen_compressed_case(case_seed(seed, index))
    bi, _ = booleanize(ci)
    left = compressed_tradeoffs(ci)
    right = boolean_tradeoffs(bi, ci.k)
    total = sum(c.weight for c in ci.base.constraints if c.soft)
    for k2 in range(ci.k + 1):
        for W2 in list(range(1, total + 2)) + [INF]:
            a = any(c <= k2 and w <= W2 for c, w in left)
            b = any(c <= k2 and w <= W2 for c, w in right)
            if a != b:
                return False, f"disagree at k'={k2} W'={W2}: compressed {a}, boolean {b}"
    best = min(((c, w) for c, w in right if w <= ci.W), default=None)
    found = solve_boolean_mincsp(bi)
    got = None if found is None else (len(found[0]), sum(
        bc.weight for bc in bi.constraints if bc.id in found[0]))
    if got != best:
        return False, f"solver {got} vs subsets {best}"
    return True, f"l={ci.ell} k={ci.k} optimum={best}"


def reduction_case(seed: int, index: int, name: str):
    from .generate import gen_in_scope_instance, gen_random_instance
    from .graphs import ProblemKind
    from .oracle import brute_force_graph, brute_force_mincsp
    from .reductions import (ENCODERS, canonicalize_twins, pull_back, pull_back_verified,
                             rewrite_eq_as_leq, rewrite_lt_as_leq_neq)

    s = case_seed(seed, index)
    if name in ("eq-as-leq", "lt-as-leq-neq"):
        import random

        rng = random.Random(s)
        inst = gen_random_instance(rng, rng.randint(2, 5), rng.randint(1, 7),
                                   ("lt", "leq", "eq", "neq"), crisp_prob=0.2, max_weight=4,
                                   k=rng.randint(0, 3),
                                   W=INF if rng.random() < 0.5 else rng.randint(1, 10))
        inst = normalize(inst)
        rewrite = rewrite_eq_as_leq if name == "eq-as-leq" else rewrite_lt_as_leq_neq
        out, back = rewrite(inst)
        before, after = brute_force_mincsp(inst), brute_force_mincsp(out)
        if (before is None) != (after is None):
            return False, "feasibility differs"
        if before is None:
            return True, "infeasible on both sides"
        if (before[0].cost, before[0].weight) != (after[0].cost, after[0].weight):
            return False, f"optimum {before[0].key[:2]} vs {after[0].key[:2]}"
        kept = canonicalize_twins(out, after[0].deleted, after[1])
        sol = pull_back(inst, back, kept)
        broken = set(evaluate(inst, after[1]).violated)
        ok = broken <= sol.deleted and (sol.cost, sol.weight) == (before[0].cost, before[0].weight)
        return ok, f"cost={sol.cost} weight={sol.weight}"
    kind = ProblemKind(name)
    inst = normalize(gen_in_scope_instance(s, kind))
    gp, back = ENCODERS[kind](inst)
    before, after = brute_force_mincsp(inst), brute_force_graph(gp)
    if (before is None) != (after is None):
        return False, "feasibility differs"
    if before is None:
        return True, "infeasible on both sides"
    if (before[0].cost, before[0].weight) != (after.cost, after.weight):
        return False, f"optimum {before[0].key[:2]} vs {(after.cost, after.weight)}"
    pulled = pull_back_verified(inst, back, after.deleted)
    if pulled is None or (pulled[0].cost, pulled[0].weight) != (after.cost, after.weight):
        return False, "pulled-back solution does not verify"
    return True, f"cost={after.cost} weight={after.weight}"


def gadget_case(seed: int, index: int):
    from .gadgets import build_dsmc_from_clique
    from .generate import clique_patterns_k2n2
    from .oracle import brute_force_dsmc, brute_force_multicolored_clique

    mask, g = list(clique_patterns_k2n2())[index]
    d, _ = build_dsmc_from_clique(g)
    clique = brute_force_multicolored_clique(g) is not None
    cut = brute_force_dsmc(replace(d, k=12)) is not None
    return clique == cut, f"pattern {mask:04b}: clique={clique} cut={cut}"


@dataclass
class SuiteReport:
    suite: str
    passed: int
    total: int
    seconds: float
    lines: list[str]

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def _tasks(suite: str, seed: int, count: int):
    if suite == "pipeline-vs-oracle":
        return [(pipeline_case, (seed, i)) for i in range(count)]
    if suite == "boolean-vs-subsets":
        return [(boolean_case, (seed, i)) for i in range(count)]
    if suite == "reductions-roundtrip":
        return [(reduction_case, (seed, i, name)) for name in REDUCTION_NAMES for i in range(count)]
    if suite == "gadget-k2n2":
        return [(gadget_case, (seed, i)) for i in range(min(count, 16))]
    raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")


def _call(task):
    fn, args = task
    return fn(*args)


def worker_limit(deterministic: bool) -> int:
    if deterministic:
        return 1
    try:
        return max(1, int(os.environ.get("PA_MINCSP_THREAD_LIMIT", "1")))
    except ValueError:
        return 1


def run_suite(suite: str, seed: int = 0, count: int | None = None, deterministic: bool = False,
              echo=print) -> SuiteReport:
    tasks = _tasks(suite, seed, DEFAULT_COUNTS[suite] if count is None else count)
    start = time.perf_counter()
    workers = worker_limit(deterministic)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_call, tasks)
    else:
        results = map(_call, tasks)
    lines, passed = [], 0
    for task, (ok, detail) in zip(tasks, results):
        label = "/".join(str(a) for a in task[1][1:])
        line = f"{suite} case {label}: {'PASS' if ok else 'FAIL'} {detail}"
        lines.append(line)
        if echo:
            echo(line)
        passed += ok
    seconds = time.perf_counter() - start
    if echo:
        echo(f"{suite}: {passed}/{len(tasks)} passed in {seconds:.1f}s")
    return SuiteReport(suite, passed, len(tasks), seconds, lines)
