import itertools

import pytest

import jcsp

EQ = [(0, 0), (1, 1)]
NEQ = [(0, 1), (1, 0)]


def exhaustive(inst_constraints, n):
    for a in itertools.product(range(2), repeat=n):
        if all(tuple(a[v] for v in scope) in tuples for scope, tuples in inst_constraints):
            return True
    return False


def test_named_algebras():
    m = jcsp.maj2()
    assert m.size == 2
    assert m.check_cd3() == []
    assert m.op("p1", [0, 1, 1]) == 1
    assert not m.is_jonsson_trivial()
    assert jcsp.dd2().is_jonsson_trivial()


def test_odd_cycle_is_unsat():
    cs = [([0, 1], EQ), ([1, 2], EQ), ([0, 2], NEQ)]
    inst = jcsp.Instance(jcsp.maj2(), 3, cs)
    out = jcsp.solve(inst)
    assert out["satisfiable"] is False
    assert out["assignment"] is None
    assert jcsp.brute_force(inst) is None
    assert jcsp.k_minimalize(inst, 3) is None


def test_solution_satisfies():
    cs = [([0, 1], [(0, 1), (1, 0), (1, 1)]), ([1, 2], NEQ), ([2], [(1,)])]
    inst = jcsp.Instance(jcsp.maj2(), 3, cs)
    out = jcsp.solve(inst, mode="local")
    assert out["satisfiable"]
    assert inst.satisfies(out["assignment"])
    assert out["stats"]["k"] == 3


def test_random_agreement():
    for seed in range(30):
        alg = jcsp.gen_algebra(2, seed)
        inst = jcsp.gen_instance(alg, vars=4, constraints=4, arity=2, seed=seed)
        out = jcsp.solve(inst)
        assert out["satisfiable"] == (jcsp.brute_force(inst) is not None)


def test_two_sat_against_python_enumeration():
    cs = [([0, 1], [(0, 1), (1, 0), (1, 1)]), ([1, 2], [(0, 0), (0, 1), (1, 1)]), ([0, 2], NEQ)]
    inst = jcsp.Instance(jcsp.maj2(), 3, cs)
    assert jcsp.solve(inst)["satisfiable"] == exhaustive(cs, 3)


def test_json_round_trip():
    alg = jcsp.gen_algebra(3, 7)
    assert jcsp.Algebra.from_json(alg.to_json()) == alg
    inst = jcsp.gen_instance(alg, vars=5, constraints=3, arity=3, seed=1)
    assert jcsp.Instance.from_json(inst.to_json()) == inst


def test_errors():
    with pytest.raises(jcsp.JcspError, match="ParseError"):
        jcsp.Algebra.from_json("{")
    with pytest.raises(ValueError):
        jcsp.Instance(jcsp.maj2(), 2, [([0, 5], EQ)])
    with pytest.raises(jcsp.JcspError):
        jcsp.solve(jcsp.Instance(jcsp.maj2(), 2, []), mode="fast")


def test_suites():
    assert "width" in jcsp.suite_names()
    r = jcsp.run_suite("two-sat", trials=20, seed=2)
    assert r["violations"] == 0
    assert r["trials"] == 20
