import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraenkel_kit.atoms import FinPerm, transposition
from fraenkel_kit.nominal import (
    FinSuppPredicate,
    SupportError,
    adequate_unary,
    choice_set_predicate,
    combine,
    empty,
    finite_set,
    from_semantic,
    full,
    pattern_predicate,
    stabilizer_counterexample,
    stabilizer_superset_check,
)
from fraenkel_kit.partition import Cell, SetPartition, enumerate_cells

SINGLE_3 = FinSuppPredicate(1, (3,), frozenset({Cell((1,), SetPartition(), 1)}))
CO_3 = FinSuppPredicate(1, (3,), frozenset({Cell((2,), SetPartition([[1]]), 1)}))


@st.composite
def predicates(draw, arity=None):
    n = arity or draw(st.integers(1, 2))
    frame = tuple(sorted(draw(st.sets(st.integers(0, 8), max_size=2))))
    cells = enumerate_cells(n, len(frame))
    chosen = draw(st.lists(st.sampled_from(cells), unique=True))
    return FinSuppPredicate(n, frame, frozenset(chosen))


def pool_tuples(d, extra=2):
    atoms = sorted(set(d.frame) | set(range(max(d.frame, default=-1) + 1 + d.arity + extra)))
    return product(atoms, repeat=d.arity)


def test_membership_examples():
    assert SINGLE_3.contains((3,))
    assert not SINGLE_3.contains((5,))
    assert not CO_3.contains((3,)) and CO_3.contains((5,))
    with pytest.raises(ValueError, match="arity"):
        SINGLE_3.contains((3, 3))


def test_apply_perm_examples():
    assert SINGLE_3.apply_perm(transposition(3, 4)).extension() == {(4,)}
    assert full(1).apply_perm(transposition(0, 9)) == full(1)
    assert SINGLE_3.apply_perm(transposition(5, 6)).equivalent(SINGLE_3)


def test_extend_support_examples():
    ext = full(1).extend_support((5,))
    assert ext.cells == {Cell((1,), SetPartition(), 1), Cell((2,), SetPartition([[1]]), 1)}
    assert SINGLE_3.extend_support((3, 8)).cells == {Cell((1,), SetPartition(), 2)}
    assert SINGLE_3.extend_support((3,)) is SINGLE_3
    with pytest.raises(ValueError):
        SINGLE_3.extend_support((4,))


def test_boolean_examples():
    assert SINGLE_3.union(CO_3).equivalent(full(1))
    assert SINGLE_3.intersection(CO_3).equivalent(empty(1))
    assert SINGLE_3.complement().equivalent(CO_3)
    with pytest.raises(ValueError):
        combine("union", SINGLE_3, full(2))
    with pytest.raises(ValueError):
        combine("xor", SINGLE_3, CO_3)


def test_from_semantic_examples():
    assert from_semantic(1, (7,), lambda t: t[0] == 7).cells == {Cell((1,), SetPartition(), 1)}
    diag = from_semantic(2, (), lambda t: t[0] == t[1])
    assert diag.cells == {Cell((1, 1), SetPartition([[1, 2]]), 0)}
    assert from_semantic(3, (1, 2), lambda t: False).cells == frozenset()


def test_from_semantic_rejects_unsupported():
    # spot checks swap representative atoms with nearby fresh atoms, so a
    # dependence on atom 1 is visible while one on a far atom need not be
    with pytest.raises(SupportError, match="membership not supported by P"):
        from_semantic(1, (), lambda t: t[0] == 1, spot_checks=10)


def test_choice_set_examples():
    assert choice_set_predicate((7,), (0, 1), 2).extension() == {(7, 7), (7, 0), (0, 7), (0, 0), (0, 1)}
    assert choice_set_predicate((), (0,), 1).extension() == {(0,)}
    assert choice_set_predicate((7,), (0,), 1).extension() == {(7,), (0,)}
    with pytest.raises(ValueError, match="invalid fresh tuple"):
        choice_set_predicate((7,), (7, 0), 2)


def test_stabilizer_examples():
    assert stabilizer_superset_check(choice_set_predicate((7,), (0, 1), 2), {7, 0, 1})
    cx = stabilizer_counterexample(SINGLE_3, ())
    assert cx is not None and SINGLE_3.apply_perm(cx).extension() != {(3,)}
    assert stabilizer_superset_check(full(1), ())


def test_adequate_partition():
    blocks = adequate_unary((2, 5))
    assert len(blocks) == 3
    for a in range(10):
        assert sum(b.contains((a,)) for b in blocks) == 1


def test_pattern_predicate():
    K = SetPartition([[1, 3], [2]])
    d = pattern_predicate(K, 3)
    for t in product(range(4), repeat=3):
        assert d.contains(t) == (t[0] == t[2] != t[1])


def test_finite_set_and_json():
    d = finite_set([(1, 2), (2, 2)])
    assert d.is_finite() and d.extension() == {(1, 2), (2, 2)}
    assert FinSuppPredicate.from_json(d.to_json()) == d
    with pytest.raises(ValueError):
        finite_set([])


@given(predicates(), st.data())
def test_apply_perm_is_image(d, data):
    atoms = data.draw(st.lists(st.integers(0, 10), unique=True, max_size=5))
    p = FinPerm(dict(zip(atoms, data.draw(st.permutations(atoms)))))
    img = d.apply_perm(p)
    for t in pool_tuples(d):
        assert img.contains(p.apply_tuple(t)) == d.contains(t)


@given(predicates(), predicates())
def test_boolean_ops_pointwise(a, b):
    if a.arity != b.arity:
        return
    u, i, c = a.union(b), a.intersection(b), a.complement()
    for t in product(range(12), repeat=a.arity):
        assert u.contains(t) == (a.contains(t) or b.contains(t))
        assert i.contains(t) == (a.contains(t) and b.contains(t))
        assert c.contains(t) == (not a.contains(t))


@given(predicates(), st.sets(st.integers(0, 9), max_size=2))
def test_extend_support_preserves_members(d, extra):
    e = d.extend_support(tuple(sorted(set(d.frame) | extra)))
    assert e.equivalent(d)
    for t in product(range(12), repeat=d.arity):
        assert e.contains(t) == d.contains(t)


@given(predicates(arity=2), st.integers(0, 10))
def test_section(d, a):
    s = d.section((a,))
    for b in range(14):
        assert s.contains((b,)) == d.contains((a, b))


@settings(max_examples=30)
@given(predicates())
def test_frame_supports(d):
    assert stabilizer_superset_check(d, d.frame, trials=20)


def test_from_semantic_matches_reference():
    rng = random.Random(3)
    for _ in range(20):
        k = rng.randint(0, 2)
        frame = tuple(sorted(rng.sample(range(10), k)))

        def member(t, frame=frame):
            return (t[0] in frame) != (t[1] == t[0])

        d = from_semantic(2, frame, member)
        for t in product(range(13), repeat=2):
            assert d.contains(t) == member(t)
