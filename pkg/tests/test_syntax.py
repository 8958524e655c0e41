import random

import pytest
from hypothesis import given, strategies as st

from aoecheck.syntax import (
    Add, And, Const, DivP2, Eq, ExistsBounded, ForallBounded, Half, Implies,
    IsPow2, Le, Lt, Monus, Mul, Not, NotPowerOfTwo, Omega, One, Or, Pow, Tau,
    TauOmegaOfZero, UnboundVariable, Var, Zero, eval_formula, eval_term,
    free_vars, num,
)

x, y, z = Var("x"), Var("y"), Var("z")


def test_eval_term_examples():
    assert eval_term(Tau(Const(12)), {}) == 4
    assert eval_term(Add(Mul(x, x), One()), {"x": 181}) == 32762 == 181 * 181 + 1
    assert eval_term(Half(Const(9)), {}) == 4
    assert eval_term(Omega(Const(12)), {}) == 3
    assert eval_term(Monus(Const(3), Const(7)), {}) == 0
    assert eval_term(DivP2(Const(32768), Const(8)), {}) == 4096


def test_eval_formula_examples():
    assert eval_formula(Lt(Zero(), One()), {}) is True
    assert eval_formula(IsPow2(Const(32768)), {}) is True
    a13 = ExistsBounded("z", y, Eq(Add(x, z), y))
    assert eval_formula(a13, {"x": 3, "y": 7}) is True
    assert eval_formula(a13, {"x": 8, "y": 7}) is False


def test_free_vars_examples():
    assert free_vars(Lt(x, y)) == {"x", "y"}
    assert free_vars(ForallBounded("x", Const(5), Lt(x, y))) == {"y"}
    assert free_vars(Zero()) == frozenset()
    # the bound is outside the binder's scope
    assert free_vars(ExistsBounded("x", x, Eq(x, x))) == {"x"}


@pytest.mark.parametrize("term, error", [
    (Var("missing"), UnboundVariable),
    (Tau(Zero()), TauOmegaOfZero),
    (Omega(Monus(One(), Const(5))), TauOmegaOfZero),
    (DivP2(Const(12), Const(6)), NotPowerOfTwo),
])
def test_eval_errors_are_distinct_and_locate_the_subterm(term, error):
    with pytest.raises(error) as info:
        eval_formula(Eq(Add(One(), term), One()), {})
    assert info.value.node == term


def test_guard_short_circuits_errors():
    a18 = Implies(Lt(Zero(), Var("n")), Eq(Var("n"), Mul(Tau(Var("n")), Omega(Var("n")))))
    assert eval_formula(a18, {"n": 0}) is True
    with pytest.raises(TauOmegaOfZero):
        eval_formula(Eq(Var("n"), Mul(Tau(Var("n")), Omega(Var("n")))), {"n": 0})


def test_constructors_validate():
    with pytest.raises(ValueError):
        Const(1)
    with pytest.raises(ValueError):
        Var("")
    with pytest.raises(ValueError):
        Var("tau")
    with pytest.raises(ValueError):
        Pow(x, -1)
    assert num(0) == Zero() and num(1) == One() and num(5) == Const(5)


@given(st.integers(min_value=0, max_value=2**200), st.integers(min_value=0, max_value=8))
def test_pow_is_iterated_multiplication(v, k):
    expanded = One()
    for _ in range(k):
        expanded = Mul(expanded, x)
    assert eval_term(Pow(x, k), {"x": v}) == eval_term(expanded, {"x": v})


def _random_formula(rng, d):
    if d == 0 or rng.random() < 0.3:
        a, b = rng.choice([x, y, z, One(), Const(3)]), rng.choice([x, y, z, Zero()])
        return rng.choice([Eq, Lt, Le])(a, b) if rng.random() < 0.8 else IsPow2(a)
    if rng.random() < 0.2:
        return Not(_random_formula(rng, d - 1))
    return rng.choice([And, Or, Implies])(_random_formula(rng, d - 1), _random_formula(rng, d - 1))


def test_negation_and_de_morgan():
    rng = random.Random(7)
    for _ in range(2000):
        f, g = _random_formula(rng, 3), _random_formula(rng, 3)
        env = {v: rng.randint(0, 6) for v in "xyz"}
        assert eval_formula(Not(f), env) == (not eval_formula(f, env))
        assert eval_formula(Not(And(f, g)), env) == eval_formula(Or(Not(f), Not(g)), env)
        assert eval_formula(Not(Or(f, g)), env) == eval_formula(And(Not(f), Not(g)), env)
        assert eval_formula(Implies(f, g), env) == eval_formula(Or(Not(f), g), env)
        assert eval_formula(Le(x, y), env) == eval_formula(Or(Lt(x, y), Eq(x, y)), env)


def test_bounded_quantifiers_match_linear_scan():
    rng = random.Random(11)
    for _ in range(500):
        body = _random_formula(rng, 2)
        env = {v: rng.randint(0, 9) for v in "yz"}
        bound = rng.randint(0, 12)
        witnesses = [eval_formula(body, {**env, "x": w}) for w in range(bound + 1)]
        assert eval_formula(ExistsBounded("x", num(bound), body), env) == any(witnesses)
        assert eval_formula(ForallBounded("x", num(bound), body), env) == all(witnesses)


def test_quantifier_does_not_leak_binding():
    env = {"x": 100}
    f = And(ExistsBounded("x", Const(3), Eq(x, Const(2))), Eq(x, Const(100)))
    assert eval_formula(f, env) is True
    assert env == {"x": 100}


def test_evaluation_is_deterministic():
    t = Add(Pow(Const(2), 862), Mul(Tau(Var("n")), Half(Var("n"))))
    values = {eval_term(t, {"n": 2**70 * 3}) for _ in range(5)}
    assert len(values) == 1
