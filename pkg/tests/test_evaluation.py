import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import direct_eval, random_fo_formula

from fraenkel_kit.atoms import FinPerm
from fraenkel_kit.evaluation import Assignment, Bounds, TriBool, UnboundVariableError, enumerate_predicates, eval_nominal
from fraenkel_kit.logic import build_lo, exists, parse
from fraenkel_kit.nominal import FinSuppPredicate, full
from fraenkel_kit.partition import Cell, SetPartition, enumerate_cells

CO_3 = FinSuppPredicate(1, (3,), frozenset({Cell((2,), SetPartition([[1]]), 1)}))


def random_predicate(rng, arity, atoms=range(6), max_frame=2):
    frame = tuple(sorted(rng.sample(list(atoms), rng.randint(0, max_frame))))
    cells = [c for c in enumerate_cells(arity, len(frame)) if rng.random() < 0.5]
    return FinSuppPredicate(arity, frame, frozenset(cells))


def test_examples():
    assert eval_nominal(parse("~(x1 = x2)"), Assignment({"x1": 5, "x2": 5})).is_false
    assert eval_nominal(parse("all x1 B1 x1"), Assignment({}, {"B1": CO_3})).is_false
    r = eval_nominal(exists(("T2",), build_lo(1)), Assignment({}, {"A1": full(1)}), Bounds(1, 1))
    assert r.is_unknown and r.bound == Bounds(1, 1)
    assert "max_support=1" in str(r)


def test_tribool_has_no_truth_value():
    with pytest.raises(TypeError):
        bool(TriBool(True))


def test_unbound_variable():
    with pytest.raises(UnboundVariableError):
        eval_nominal(parse("x1 = x2"), Assignment({"x1": 0}))
    with pytest.raises(UnboundVariableError):
        eval_nominal(parse("A1 x1"), Assignment({"x1": 0}))


def test_assignment_arity_check():
    with pytest.raises(ValueError):
        Assignment({}, {"A2": full(1)})


def test_bounds_validation():
    with pytest.raises(ValueError):
        Bounds(-1, 0)
    assert Bounds(0, 1) <= Bounds(1, 1) and not Bounds(2, 0) <= Bounds(1, 1)


def test_enumerate_predicates_examples():
    assert len(list(enumerate_predicates(set(), 1, Bounds(0, 0)))) == 2
    got = list(enumerate_predicates({3}, 1, Bounds(0, 1)))
    exts = [d for d in got if d.frame == (3,)]
    assert len(got) == 6 and len(exts) == 4
    assert any(d.cells == {Cell((1,), SetPartition(), 1)} for d in exts)
    assert any(d.equivalent(CO_3) for d in exts)
    assert len(list(enumerate_predicates(set(), 2, Bounds(0, 0)))) == 4


def test_enumerate_predicates_unique_and_deterministic():
    a = list(enumerate_predicates({2}, 2, Bounds(1, 2)))
    assert a == list(enumerate_predicates({2}, 2, Bounds(1, 2)))
    assert len({(d.frame, d.cells) for d in a}) == len(a)
    assert all(set(d.frame) <= {0, 2} for d in a)


def test_witness_order_prefers_small_extensions():
    first = next(d for d in enumerate_predicates({0}, 1, Bounds()) if d.contains((0,)))
    assert first.extension() == {(0,)}


def test_second_order_quantifiers():
    assert eval_nominal(parse("ex D1 (D1 x1 & ~D1 x2)"), Assignment({"x1": 0, "x2": 1})).is_true
    assert eval_nominal(parse("all D1 (D1 x1 | ~D1 x1)"), Assignment({"x1": 4})).is_unknown
    assert eval_nominal(parse("all D1 D1 x1"), Assignment({"x1": 4})).is_false
    # vacuous predicate quantifier is decided by its body
    assert eval_nominal(parse("all D1 x1 = x1"), Assignment({"x1": 4})).is_true


def _fo_case(rng):
    P1, R2 = random_predicate(rng, 1), random_predicate(rng, 2)
    F = random_fo_formula(rng, 4, free=("c",))
    c = rng.randrange(8)
    return F, {"c": c}, {"P1": P1, "R2": R2}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_first_order_exactness(seed):
    rng = random.Random(seed)
    F, ind, pred = _fo_case(rng)
    atoms = set(ind.values()) | set(pred["P1"].frame) | set(pred["R2"].frame)
    r = eval_nominal(F, Assignment(ind, pred))
    assert not r.is_unknown
    assert r.value == direct_eval(F, ind, pred, atoms, extra_fresh=3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_equivariance(seed):
    rng = random.Random(seed)
    F, ind, pred = _fo_case(rng)
    atoms = list(range(10))
    p = FinPerm(dict(zip(atoms, rng.sample(atoms, len(atoms)))))
    f = Assignment(ind, pred)
    assert eval_nominal(F, f).value == eval_nominal(F, f.permuted(p)).value


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_bound_monotonicity(seed):
    rng = random.Random(seed)
    D = random_predicate(rng, 1, max_frame=1)
    F = rng.choice(
        [
            parse("ex E1 all x1 (E1 x1 <-> ~D1 x1)"),
            parse("all E1 (E1 c -> D1 c)"),
            parse("ex E1 (E1 c & ~E1 d)"),
            parse("ex E2 all x1 E2 x1 x1"),
        ]
    )
    f = Assignment({"c": rng.randrange(4), "d": rng.randrange(4)}, {"D1": D})
    small = eval_nominal(F, f, Bounds(0, 1))
    big = eval_nominal(F, f, Bounds(2, 3))
    if not small.is_unknown:
        assert big.value == small.value
