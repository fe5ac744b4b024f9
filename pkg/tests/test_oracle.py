import random
from math import comb

import pytest

from pa_mincsp.gadgets import CliqueInstance
from pa_mincsp.generate import gen_dsmc, gen_in_scope_instance, gen_random_instance
from pa_mincsp.graphs import ProblemKind, graph_is_feasible, parse_graph_problem
from pa_mincsp.model import Constraint, GuardExceeded, Instance, make_instance
from pa_mincsp.oracle import (all_weak_orders, brute_force_dsmc, brute_force_graph,
                              brute_force_mincsp, brute_force_multicolored_clique, fubini)
from pa_mincsp.reductions import to_dsmc

FUBINI = [1, 1, 3, 13, 75, 541, 4683]


def test_fubini_recurrence():
    a = [1]
    for m in range(1, 7):
        a.append(sum(comb(m, j) * a[m - j] for j in range(1, m + 1)))
    assert a == FUBINI
    assert [fubini(n) for n in range(7)] == FUBINI
    assert [sum(1 for _ in all_weak_orders(n)) for n in range(7)] == FUBINI


def test_mincsp_examples():
    sol, ranks = brute_force_mincsp(make_instance([("x", "lt", "y"), ("y", "lt", "x")], 1))
    assert sol.cost == 1 and sol.deleted == {0} and ranks["y"] < ranks["x"]
    sol, _ = brute_force_mincsp(make_instance([("x", "eq", "y"), ("y", "eq", "z"), ("x", "neq", "z")], 1))
    assert (sol.cost, sorted(sol.deleted)) == (1, [0])
    assert brute_force_mincsp(make_instance([("x", "lt", "x", False)], 3)) is None


def test_mincsp_guard():
    rows = [(f"v{i}", "lt", f"v{i + 1}") for i in range(9)]
    with pytest.raises(GuardExceeded):
        brute_force_mincsp(make_instance(rows, 1))


def test_renaming_and_reordering_invariance():
    rng = random.Random(11)
    for seed in range(80):
        inst = gen_random_instance(seed, 5, 7, ("lt", "leq", "eq", "neq"), crisp_prob=0.2,
                                   max_weight=4, k=3, self_loops=True)
        names = list(inst.variables)
        shuffled = names[:]
        rng.shuffle(shuffled)
        rename = {a: "r" + b for a, b in zip(names, shuffled)}
        cons = [Constraint(c.id, rename[c.x], rename[c.y], c.rel, c.soft, c.weight)
                for c in inst.constraints]
        rng.shuffle(cons)
        other = Instance(tuple(rename[v] for v in reversed(names)), tuple(cons), inst.k, inst.W)
        a, b = brute_force_mincsp(inst), brute_force_mincsp(other)
        assert (a is None) == (b is None)
        if a is not None:
            assert a[0] == b[0]


def test_dsmc_examples():
    gp = parse_graph_problem("kind dsmc\nk 1\narc a b soft\narc b a soft\npair a b soft\n")
    assert len(brute_force_dsmc(gp)) == 1
    stuck = parse_graph_problem("kind dsmc\nk 5\narc a b crisp\narc b a crisp\npair a b crisp\n")
    assert brute_force_dsmc(stuck) is None


def test_dsmc_matches_mincsp_on_leq_neq():
    for seed in range(300):
        inst = gen_in_scope_instance(seed, ProblemKind.DSMC, max_vars=5)
        gp, _ = to_dsmc(inst)
        ref = brute_force_mincsp(inst)
        found = brute_force_dsmc(gp)
        if ref is None:
            assert found is None
        else:
            assert found is not None and len(found) == ref[0].cost


def test_dsmc_kernel_matches_generic_search():
    for seed in range(60):
        gp = gen_dsmc(seed)
        generic = brute_force_graph(gp)
        found = brute_force_dsmc(gp)
        assert (generic is None) == (found is None)
        if found is not None:
            assert len(found) == generic.cost
            assert graph_is_feasible(gp, found)


def test_dsmc_guard():
    lines = ["kind dsmc", "k 2"] + [f"arc a{i} a{i + 1} soft" for i in range(27)]
    with pytest.raises(GuardExceeded):
        brute_force_dsmc(parse_graph_problem("\n".join(lines)))


def test_clique_examples():
    g = CliqueInstance.build([("a", "b"), ("c", "d")], [("a", "c")])
    assert brute_force_multicolored_clique(g) == {"a", "c"}
    assert brute_force_multicolored_clique(CliqueInstance.build([("a", "b"), ("c", "d")], [])) is None
    parts = [("a1", "a2"), ("b1", "b2"), ("c1", "c2")]
    edges = [(u, v) for i, p in enumerate(parts) for q in parts[i + 1:] for u in p for v in q]
    assert len(brute_force_multicolored_clique(CliqueInstance.build(parts, edges))) == 3


def test_clique_guard():
    parts = [tuple(f"p{i}v{a}" for a in range(32)) for i in range(4)]
    with pytest.raises(GuardExceeded):
        brute_force_multicolored_clique(CliqueInstance.build(parts, []))
