from math import comb

import pytest

from pa_mincsp.fpt import compress_step, compression_driver, enumerate_weak_orders, solve
from pa_mincsp.generate import gen_pipeline_case
from pa_mincsp.model import INF, GuardExceeded, make_instance
from pa_mincsp.oracle import brute_force_mincsp


def ordered_bell(n):
    """a(n) = sum_k C(n, k) a(n - k): choose the bottom block, order the rest."""
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(comb(m, j) * a[m - j] for j in range(1, m + 1)))
    return a[n]


@pytest.mark.parametrize("n", range(7))
def test_weak_order_counts(n):
    orders = list(enumerate_weak_orders(range(n)))
    assert len(orders) == ordered_bell(n)
    assert len({tuple(sorted(o.items())) for o in orders}) == len(orders)
    assert all(sorted(set(o.values())) == list(range(len(set(o.values())))) for o in orders)


def test_weak_order_filtering():
    inst = make_instance([("a", "lt", "b"), ("b", "eq", "c")], 0)
    orders = list(enumerate_weak_orders(["a", "b", "c"], inst.constraints))
    assert orders == [{"a": 0, "b": 1, "c": 1}]


def test_weak_order_guard():
    with pytest.raises(GuardExceeded):
        next(enumerate_weak_orders(range(13)))


def test_solve_examples():
    sol, ranks = solve(make_instance([("x", "lt", "y"), ("y", "lt", "x")], 1))
    assert (sol.cost, sol.weight, sorted(sol.deleted)) == (1, 1, [0])
    sol, _ = solve(make_instance([("x", "lt", "y"), ("y", "lt", "x"), ("y", "lt", "z"), ("z", "lt", "y")], 2))
    assert (sol.cost, sol.weight, sorted(sol.deleted)) == (2, 2, [0, 2])
    sol, _ = solve(make_instance([("x", "eq", "y"), ("y", "eq", "z"), ("x", "neq", "z")], 1))
    assert sorted(sol.deleted) == [0]
    assert solve(make_instance([("x", "lt", "y"), ("y", "lt", "x")], 0)) is None


def test_solve_weighted_prefers_light_deletions():
    inst = make_instance([("x", "lt", "y", True, 5), ("y", "lt", "x", True, 2)], 1)
    sol, ranks = solve(inst)
    assert sol.deleted == {1} and ranks["x"] < ranks["y"]
    assert solve(make_instance([("x", "lt", "y", True, 5), ("y", "lt", "x", True, 5)], 1, W=4)) is None


def test_solve_self_loops():
    sol, _ = solve(make_instance([("x", "neq", "x", True, 3), ("x", "lt", "y")], 1))
    assert sol.deleted == {0} and sol.weight == 3
    assert solve(make_instance([("x", "lt", "x", False)], 4)) is None
    sol, _ = solve(make_instance([("x", "eq", "x", False)], 0))
    assert sol.cost == 0


def test_solve_exact_values():
    inst = make_instance([("a", "lt", "b"), ("b", "lt", "c"), ("c", "lt", "a"), ("a", "neq", "d")], 1)
    sol, ranks, values = solve(inst, with_values=True)
    assert sol.cost == 1
    order = sorted(inst.variables, key=lambda v: values[v])
    assert [ranks[v] for v in order] == sorted(ranks[v] for v in order)


def test_solve_rejects_leq():
    with pytest.raises(ValueError):
        solve(make_instance([("x", "leq", "y")], 0))


def test_compress_step_uses_incumbent_and_x_in():
    inst = make_instance([("x", "lt", "y"), ("y", "lt", "z"), ("z", "lt", "x")], 1)
    sol, ranks, values = compress_step(inst, {2}, 1)
    assert sol.deleted == {0}  # all three cuts tie; lowest id wins
    assert ranks["y"] < ranks["z"] < ranks["x"]
    with pytest.raises(ValueError):
        compress_step(inst, set(), 1)


def test_compress_step_weighted_identification():
    """The kept X_in constraint merges x and y; the cheaper path constraint goes."""
    inst = make_instance([("x", "eq", "y", True, 100), ("x", "lt", "z", True, 1), ("z", "lt", "y", True, 1)], 1)
    sol, _, _ = compress_step(inst, {0}, 1)
    assert sol.deleted == {1}


def test_driver_and_solve_agree_with_oracle():
    for seed in range(120):
        inst = gen_pipeline_case(seed)
        if any(c.is_self_loop for c in inst.constraints):
            continue
        ref = brute_force_mincsp(inst)
        got = compression_driver(inst, inst.k, inst.W)
        if ref is None:
            assert got is None
            continue
        assert (got[0].cost, got[0].weight, sorted(got[0].deleted)) == \
               (ref[0].cost, ref[0].weight, sorted(ref[0].deleted))


@pytest.mark.parametrize("W", [INF, 3])
def test_budget_boundary(W):
    inst = make_instance([("a", "lt", "b", True, 3), ("b", "lt", "a", True, 3)], 1, W=W)
    sol, _ = solve(inst)
    assert sol.weight == 3
