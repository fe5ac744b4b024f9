from itertools import product

import pytest

from pa_mincsp.generate import gen_random_instance
from pa_mincsp.model import EQ, LEQ, LT, NEQ, Constraint, Instance, evaluate, make_instance
from pa_mincsp.oracle import all_weak_orders
from pa_mincsp.satisfiability import check_satisfiable, drop_disequalities, trivial_solve


def satisfiable_by_enumeration(inst):
    pos = {v: i for i, v in enumerate(inst.variables)}
    return any(
        all(c.rel.holds(r[pos[c.x]], r[pos[c.y]]) for c in inst.constraints)
        for r in all_weak_orders(len(pos))
    )


def test_examples():
    assert check_satisfiable(make_instance([("x", "lt", "y"), ("y", "lt", "x")], 0)) is None
    assert check_satisfiable(make_instance([("x", "leq", "y"), ("y", "leq", "x")], 0)) == {"x": 0, "y": 0}
    w = check_satisfiable(make_instance([("a", "lt", "b"), ("b", "lt", "c"), ("a", "neq", "c")], 0))
    assert w["a"] < w["b"] < w["c"]
    assert check_satisfiable(make_instance([("a", "eq", "b"), ("b", "leq", "c"), ("c", "leq", "a"),
                                            ("a", "neq", "c")], 0)) is None


def test_self_loops():
    assert check_satisfiable(make_instance([("x", "lt", "x")], 0)) is None
    assert check_satisfiable(make_instance([("x", "neq", "x")], 0)) is None
    assert check_satisfiable(make_instance([("x", "leq", "x"), ("x", "eq", "x")], 0)) == {"x": 0}


def test_every_two_variable_instance():
    """All sets of constraints over two variables (ordered pairs and self-loops)."""
    atoms = [Constraint(0, x, y, rel) for x, y in product("ab", repeat=2) for rel in (LT, LEQ, EQ, NEQ)]
    count = 0
    for mask in range(1 << len(atoms)):
        chosen = tuple(
            Constraint(i, c.x, c.y, c.rel) for i, c in enumerate(a for j, a in enumerate(atoms) if mask >> j & 1)
        )
        inst = Instance(("a", "b"), chosen, 0)
        witness = check_satisfiable(inst)
        assert (witness is not None) == satisfiable_by_enumeration(inst)
        if witness is not None:
            assert not evaluate(inst, witness).violated
        count += 1
    assert count == 1 << 16


def test_random_agreement():
    for seed in range(300):
        inst = gen_random_instance(seed, 2 + seed % 4, 1 + seed % 9, ("lt", "leq", "eq", "neq"),
                                   self_loops=seed % 7 == 0)
        assert (check_satisfiable(inst) is not None) == satisfiable_by_enumeration(inst)


def test_trivial_solve_equalities():
    inst = make_instance([("x", "leq", "y"), ("y", "eq", "z", False)], 0)
    sol, ranks = trivial_solve(inst)
    assert sol.cost == 0 and len(set(ranks.values())) == 1


def test_trivial_solve_disequalities():
    sol, ranks = trivial_solve(make_instance([("x", "neq", "y"), ("y", "neq", "z")], 0))
    assert sol.cost == 0 and len(set(ranks.values())) == 3
    sol, _ = trivial_solve(make_instance([("x", "neq", "x", True, 2), ("x", "neq", "y")], 1))
    assert sol.deleted == {0} and sol.weight == 2
    assert trivial_solve(make_instance([("x", "neq", "x", False)], 5)) is None
    assert trivial_solve(make_instance([("x", "neq", "x")], 0)) is None
    with pytest.raises(ValueError):
        trivial_solve(make_instance([("x", "lt", "y")], 0))


def test_drop_disequalities():
    inst = make_instance([("x", "neq", "y"), ("x", "lt", "y"), ("z", "neq", "z"), ("y", "lt", "z")], 2)
    reduced, forced, back = drop_disequalities(inst)
    assert reduced.relations == {LT}
    assert [c.id for c in reduced.constraints] == [0, 1]
    assert back == {0: 1, 1: 3}
    assert forced == {2}
    with pytest.raises(ValueError):
        drop_disequalities(make_instance([("x", "eq", "y")], 0))
