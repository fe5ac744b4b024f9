import pytest

from pa_mincsp.generate import gen_in_scope_instance
from pa_mincsp.graphs import (ProblemKind, graph_is_feasible, parse_graph_problem,
                              serialize_graph_problem)
from pa_mincsp.model import EQ, LEQ, NEQ, make_instance, normalize
from pa_mincsp.oracle import brute_force_dsmc, brute_force_graph, brute_force_mincsp
from pa_mincsp.reductions import (canonicalize_twins, dsmc_to_mincsp, graph_to_mincsp, pull_back,
                                  pull_back_verified, rewrite_eq_as_leq, rewrite_lt_as_leq_neq,
                                  to_dfas, to_dsmc, to_edge_multicut, to_subset_dfas)


def optimum(inst):
    found = brute_force_mincsp(inst)
    return None if found is None else (found[0].cost, found[0].weight)


def test_eq_rewrite_keeps_optimum():
    inst = make_instance([("x", "eq", "y"), ("x", "neq", "y", False)], 1)
    out, back = rewrite_eq_as_leq(inst)
    assert [(c.x, c.y, c.rel) for c in out.constraints] == [("x", "y", LEQ), ("y", "x", LEQ), ("x", "y", NEQ)]
    assert back == {0: 0, 1: 0, 2: 1}
    assert optimum(inst) == optimum(out) == (1, 1)


def test_crisp_twins():
    out, _ = rewrite_eq_as_leq(make_instance([("x", "eq", "y", False)], 0))
    assert all(not c.soft for c in out.constraints) and len(out.constraints) == 2
    out, _ = rewrite_lt_as_leq_neq(make_instance([("x", "lt", "y", False)], 0))
    assert [(c.rel, c.soft) for c in out.constraints] == [(LEQ, False), (NEQ, False)]


def test_twins_inherit_weight():
    out, _ = rewrite_lt_as_leq_neq(make_instance([("x", "lt", "y", True, 4)], 1))
    assert [c.weight for c in out.constraints] == [4, 4]


def test_lt_rewrite_examples():
    two = make_instance([("x", "lt", "y"), ("y", "lt", "x")], 1)
    assert optimum(two) == optimum(rewrite_lt_as_leq_neq(two)[0]) == (1, 1)
    chain = make_instance([("a", "lt", "b"), ("b", "lt", "c"), ("c", "lt", "d")], 0)
    assert optimum(rewrite_lt_as_leq_neq(chain)[0]) == (0, 0)


def test_canonicalize_never_deletes_both_twins():
    inst = make_instance([("x", "eq", "y"), ("x", "neq", "y", False)], 2)
    out, back = rewrite_eq_as_leq(inst)
    ranks = {"x": 0, "y": 1}
    kept = canonicalize_twins(out, {0, 1}, ranks)
    assert kept == {1}  # only y <= x is broken by x < y
    assert pull_back(inst, back, kept).deleted == {0}


def test_dfas_examples():
    gp, back = to_dfas(make_instance([("x", "lt", "y"), ("y", "lt", "x")], 1))
    assert gp.kind is ProblemKind.DFAS and brute_force_graph(gp).cost == 1
    acyclic, _ = to_dfas(make_instance([("x", "lt", "y"), ("y", "lt", "z"), ("x", "lt", "z")], 0))
    assert brute_force_graph(acyclic).cost == 0
    cycle = make_instance([("a", "lt", "b"), ("b", "lt", "c"), ("c", "lt", "a")], 1)
    assert brute_force_graph(to_dfas(cycle)[0]).cost == optimum(cycle)[0] == 1
    with pytest.raises(ValueError):
        to_dfas(make_instance([("x", "leq", "y")], 0))


def test_multicut_examples():
    path = make_instance([("a", "eq", "b"), ("b", "eq", "c"), ("a", "neq", "c")], 1)
    gp, _ = to_edge_multicut(path)
    assert brute_force_graph(gp).cost == optimum(path)[0] == 1
    lonely, _ = to_edge_multicut(make_instance([("a", "neq", "b")], 0))
    assert brute_force_graph(lonely).cost == 0
    stuck = make_instance([("a", "eq", "b", False), ("a", "neq", "b", False)], 3)
    assert brute_force_graph(to_edge_multicut(stuck)[0]) is None and optimum(stuck) is None
    with pytest.raises(ValueError):
        to_edge_multicut(make_instance([("x", "lt", "y")], 0))


def test_subset_dfas_examples():
    plain, _ = to_subset_dfas(make_instance([("x", "leq", "y"), ("y", "leq", "x")], 0))
    assert brute_force_graph(plain).cost == 0
    special = make_instance([("x", "lt", "y"), ("y", "leq", "x")], 1)
    gp, _ = to_subset_dfas(special)
    assert [a.special for a in gp.arcs] == [True, False]
    assert brute_force_graph(gp).cost == optimum(special)[0] == 1
    single, _ = to_subset_dfas(make_instance([("x", "lt", "y")], 0))
    assert brute_force_graph(single).cost == 0


def test_dsmc_examples():
    inst = make_instance([("x", "leq", "y"), ("y", "leq", "x"), ("x", "neq", "y")], 1)
    gp, _ = to_dsmc(inst)
    assert len(brute_force_dsmc(gp)) == optimum(inst)[0] == 1
    back, _ = dsmc_to_mincsp(gp)
    assert back == inst
    empty = parse_graph_problem("kind dsmc\nk 0\narc a b soft\narc b a soft\n")
    assert brute_force_dsmc(empty) == frozenset()


def test_dsmc_round_trip_is_structural():
    for seed in range(40):
        inst = gen_in_scope_instance(seed, ProblemKind.DSMC)
        gp, _ = to_dsmc(inst)
        again, back = dsmc_to_mincsp(gp)
        assert again == inst
        assert back == {c.id: c.id for c in inst.constraints}


@pytest.mark.parametrize("kind, encode", [
    (ProblemKind.DFAS, to_dfas),
    (ProblemKind.EDGE_MULTICUT, to_edge_multicut),
    (ProblemKind.SUBSET_DFAS, to_subset_dfas),
    (ProblemKind.DSMC, to_dsmc),
])
def test_graph_encodings_preserve_optima(kind, encode):
    for seed in range(60):
        inst = normalize(gen_in_scope_instance(seed, kind))
        gp, back = encode(inst)
        graph_opt = brute_force_graph(gp)
        assert optimum(inst) == (None if graph_opt is None else (graph_opt.cost, graph_opt.weight))
        if graph_opt is not None:
            sol, _ = pull_back_verified(inst, back, graph_opt.deleted)
            assert (sol.cost, sol.weight) == (graph_opt.cost, graph_opt.weight)
        # the inverse view reaches the same optimum
        inverse, _ = graph_to_mincsp(gp)
        assert optimum(inverse) == optimum(inst)


def test_graph_text_round_trip():
    for kind in ProblemKind:
        inst = gen_in_scope_instance(3, kind)
        gp, _ = {ProblemKind.DFAS: to_dfas, ProblemKind.EDGE_MULTICUT: to_edge_multicut,
                 ProblemKind.SUBSET_DFAS: to_subset_dfas, ProblemKind.DSMC: to_dsmc}[kind](inst)
        again = parse_graph_problem(serialize_graph_problem(gp))
        assert again.kind is kind
        assert [(a.u, a.v, a.soft, a.weight, a.special) for a in again.arcs] == \
               [(a.u, a.v, a.soft, a.weight, a.special) for a in gp.arcs]


def test_graph_feasibility_semantics():
    gp = parse_graph_problem("k 1\narc a b soft\narc b a soft\narc b c crisp special\n")
    assert gp.kind is ProblemKind.SUBSET_DFAS
    assert graph_is_feasible(gp)
    gp = parse_graph_problem("k 1\nedge a b soft\nedge b c soft\npair a c crisp\n")
    assert not graph_is_feasible(gp) and graph_is_feasible(gp, [1])


def test_rewrite_on_eq_free_input_is_identity_shaped():
    inst = make_instance([("x", "leq", "y"), ("y", "neq", "z")], 0)
    out, back = rewrite_eq_as_leq(inst)
    assert out.constraints == inst.constraints and back == {0: 0, 1: 1}
    assert EQ not in out.relations
