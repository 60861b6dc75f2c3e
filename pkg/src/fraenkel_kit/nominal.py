"""Finitely supported predicates over the atoms.

A predicate is stored as a support frame together with the set of cells
(relative to that frame) it contains.  Membership is therefore constant on
cells, so every permutation fixing the frame pointwise fixes the predicate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .atoms import FinPerm, fresh_atoms, transposition
from .partition import (
    Cell,
    SetPartition,
    check_frame,
    check_fresh_tuple,
    classify,
    enumerate_cells,
    make_frame,
    representative,
)


class SupportError(ValueError):
    """A membership test is not invariant under the stabilizer of the claimed support."""


def _cell_key(t: Sequence[int], pos: dict[int, int], q: int):
    e = []
    groups: dict[int, list[int]] = {}
    for j, a in enumerate(t, start=1):
        p = pos.get(a)
        if p is None:
            e.append(q + 1)
            groups.setdefault(a, []).append(j)
        else:
            e.append(p)
    return tuple(e), tuple(tuple(g) for g in groups.values())


@dataclass(frozen=True)
class FinSuppPredicate:
    arity: int
    frame: tuple[int, ...]
    cells: frozenset[Cell]
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)
    _keys: frozenset = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be positive")
        frame = check_frame(self.frame)
        object.__setattr__(self, "frame", frame)
        cells = frozenset(self.cells)
        object.__setattr__(self, "cells", cells)
        q = len(frame)
        for c in cells:
            if c.n != self.arity or c.q != q:
                raise ValueError(f"{c!r} is not a cell for arity {self.arity}, frame size {q}")
        object.__setattr__(self, "_pos", {a: i + 1 for i, a in enumerate(frame)})
        object.__setattr__(self, "_keys", frozenset((c.e, c.K.blocks) for c in cells))

    # -- membership -----------------------------------------------------

    def contains(self, t: Sequence[int]) -> bool:
        if len(t) != self.arity:
            raise ValueError(f"arity mismatch: predicate is {self.arity}-ary, tuple has length {len(t)}")
        return _cell_key(t, self._pos, len(self.frame)) in self._keys

    def __contains__(self, t):
        return self.contains(tuple(t))

    @property
    def q(self) -> int:
        return len(self.frame)

    def is_finite(self) -> bool:
        return all(c.is_finite for c in self.cells)

    def extension(self) -> frozenset[tuple[int, ...]]:
        """The set of member tuples; only defined for finite predicates."""
        if not self.is_finite():
            raise ValueError("predicate has infinite extension")
        return frozenset(representative(self.frame, (), c) for c in self.cells)

    def sorted_cells(self) -> list[Cell]:
        return sorted(self.cells)

    # -- the group action and re-expression ------------------------------

    def apply_perm(self, p: FinPerm) -> FinSuppPredicate:
        """Image predicate ``{p(t) : t in self}``."""
        image = [p(a) for a in self.frame]
        new_frame = make_frame(image)
        new_pos = {a: i + 1 for i, a in enumerate(new_frame)}
        q = len(self.frame)
        reindex = {i + 1: new_pos[b] for i, b in enumerate(image)}
        cells = frozenset(
            Cell(tuple(reindex[x] if x <= q else q + 1 for x in c.e), c.K, q) for c in self.cells
        )
        return FinSuppPredicate(self.arity, new_frame, cells)

    def extend_support(self, frame: Iterable[int]) -> FinSuppPredicate:
        frame = check_frame(frame)
        if not set(self.frame) <= set(frame):
            raise ValueError(f"frame {frame} does not contain support {self.frame}")
        if frame == self.frame:
            return self
        mu = fresh_atoms(frame, self.arity)
        cells = frozenset(
            c for c in enumerate_cells(self.arity, len(frame)) if self.contains(representative(frame, mu, c))
        )
        return FinSuppPredicate(self.arity, frame, cells)

    def equivalent(self, other: FinSuppPredicate) -> bool:
        """Semantic equality: same member tuples."""
        if self.arity != other.arity:
            return False
        if self.frame == other.frame:
            return self.cells == other.cells
        common = make_frame(self.frame + other.frame)
        return self.extend_support(common).cells == other.extend_support(common).cells

    # -- Boolean algebra --------------------------------------------------

    def union(self, other: FinSuppPredicate) -> FinSuppPredicate:
        return combine("union", self, other)

    def intersection(self, other: FinSuppPredicate) -> FinSuppPredicate:
        return combine("intersection", self, other)

    def complement(self) -> FinSuppPredicate:
        return combine("complement", self)

    def section(self, prefix: Sequence[int]) -> FinSuppPredicate:
        """``{eta : prefix . eta in self}`` as a predicate of the remaining arity."""
        m = self.arity - len(prefix)
        if m < 1:
            raise ValueError("section must leave at least one coordinate")
        prefix = tuple(prefix)
        frame = make_frame(self.frame + prefix)
        mu = fresh_atoms(frame, m)
        cells = frozenset(
            c for c in enumerate_cells(m, len(frame)) if self.contains(prefix + representative(frame, mu, c))
        )
        return FinSuppPredicate(m, frame, cells)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"arity": self.arity, "frame": list(self.frame), "cells": [c.key() for c in self.sorted_cells()]}

    @classmethod
    def from_json(cls, data: dict) -> FinSuppPredicate:
        from .partition import cell_from_key

        frame = tuple(data["frame"])
        return cls(int(data["arity"]), frame, frozenset(cell_from_key(k, len(frame)) for k in data["cells"]))

    def __repr__(self):
        return f"FinSuppPredicate(arity={self.arity}, frame={self.frame}, cells={[c.key() for c in self.sorted_cells()]})"


def combine(op: str, a: FinSuppPredicate, b: FinSuppPredicate | None = None) -> FinSuppPredicate:
    if op == "complement":
        if b is not None:
            raise ValueError("complement takes one operand")
        all_cells = frozenset(enumerate_cells(a.arity, a.q))
        return FinSuppPredicate(a.arity, a.frame, all_cells - a.cells)
    if op not in ("union", "intersection"):
        raise ValueError(f"unknown operation {op!r}")
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if a.arity != b.arity:
        raise ValueError(f"arity mismatch: {a.arity} vs {b.arity}")
    frame = make_frame(a.frame + b.frame)
    ca, cb = a.extend_support(frame).cells, b.extend_support(frame).cells
    cells = ca | cb if op == "union" else ca & cb
    return FinSuppPredicate(a.arity, frame, cells)


def union_all(preds: Iterable[FinSuppPredicate], arity: int) -> FinSuppPredicate:
    preds = list(preds)
    frame = make_frame(a for p in preds for a in p.frame)
    cells: set[Cell] = set()
    for p in preds:
        if p.arity != arity:
            raise ValueError(f"arity mismatch: {p.arity} vs {arity}")
        cells |= p.extend_support(frame).cells
    return FinSuppPredicate(arity, frame, frozenset(cells))


def empty(n: int, frame: Iterable[int] = ()) -> FinSuppPredicate:
    return FinSuppPredicate(n, make_frame(frame), frozenset())


def full(n: int, frame: Iterable[int] = ()) -> FinSuppPredicate:
    frame = make_frame(frame)
    return FinSuppPredicate(n, frame, frozenset(enumerate_cells(n, len(frame))))


def finite_set(tuples: Iterable[Sequence[int]], n: int | None = None) -> FinSuppPredicate:
    tuples = [tuple(t) for t in tuples]
    if n is None:
        if not tuples:
            raise ValueError("arity needed for an empty set")
        n = len(tuples[0])
    frame = make_frame(a for t in tuples for a in t)
    return FinSuppPredicate(n, frame, frozenset(classify(t, frame) for t in tuples))


def from_semantic(
    n: int,
    frame: Iterable[int],
    member: Callable[[tuple[int, ...]], bool],
    spot_checks: int = 3,
    seed: int = 0,
) -> FinSuppPredicate:
    """Reify a membership test that is invariant under the stabilizer of ``frame``.

    One representative per cell decides that cell.  Invariance is spot-checked
    with random transpositions fixing the frame; a detected violation raises
    SupportError.
    """
    frame = check_frame(make_frame(frame))
    mu = fresh_atoms(frame, n)
    rng = random.Random(seed)
    pool = fresh_atoms(frame, 2 * n + 2)
    cells = set()
    for c in enumerate_cells(n, len(frame)):
        rep = representative(frame, mu, c)
        verdict = bool(member(rep))
        if verdict:
            cells.add(c)
        if c.K:
            moved = [rep[b[0] - 1] for b in c.K.blocks]
            for _ in range(spot_checks):
                a = rng.choice(moved)
                b = rng.choice([x for x in pool if x != a])
                if bool(member(transposition(a, b).apply_tuple(rep))) != verdict:
                    raise SupportError(f"membership not supported by P={frame} (cell {c.key()})")
    return FinSuppPredicate(n, frame, frozenset(cells))


def adequate_unary(frame: Iterable[int]) -> list[FinSuppPredicate]:
    """The blocks {nu_1}, ..., {nu_q}, atoms minus frame."""
    frame = check_frame(make_frame(frame))
    q = len(frame)
    out = [FinSuppPredicate(1, frame, frozenset({Cell((j,), SetPartition(), q)})) for j in range(1, q + 1)]
    out.append(FinSuppPredicate(1, frame, frozenset({Cell((q + 1,), SetPartition([[1]]), q)})))
    return out


def product_predicate(factors: Sequence[FinSuppPredicate]) -> FinSuppPredicate:
    """Cartesian product of unary predicates."""
    if any(f.arity != 1 for f in factors):
        raise ValueError("product of unary predicates only")
    frame = make_frame(a for f in factors for a in f.frame)
    return from_semantic(len(factors), frame, lambda t: all(f.contains((a,)) for f, a in zip(factors, t)))


def equality_pattern(t: Sequence[int], positions: Iterable[int]) -> SetPartition:
    groups: dict[int, list[int]] = {}
    for j in sorted(positions):
        groups.setdefault(t[j - 1], []).append(j)
    return SetPartition(groups.values())


def pattern_predicate(K: SetPartition, n: int) -> FinSuppPredicate:
    """Tuples whose equality pattern on the positions of K is exactly K."""
    ground = K.ground
    if any(i > n for i in ground):
        raise ValueError("partition mentions a position beyond the arity")
    return from_semantic(n, (), lambda t: equality_pattern(t, ground) == K)


def choice_set_predicate(frame: Iterable[int], mu: Sequence[int], n: int) -> FinSuppPredicate:
    """The finite predicate holding exactly one representative of each cell."""
    frame = check_frame(make_frame(frame))
    mu = tuple(mu)
    if len(mu) != n:
        raise ValueError("invalid fresh tuple")
    check_fresh_tuple(frame, mu, n)
    reps = [representative(frame, mu, c) for c in enumerate_cells(n, len(frame))]
    return finite_set(reps, n).extend_support(make_frame(frame + mu))


def stabilizer_counterexample(
    d: FinSuppPredicate, P: Iterable[int], trials: int = 100, seed: int = 0
) -> FinPerm | None:
    """A transposition fixing P pointwise that moves d, or None if none is found.

    All transpositions inside a window (the frame, P and two fresh atoms) are
    tried, which already decides the question: a transposition of two atoms
    outside frame and P fixes d, and atoms outside frame and P are
    interchangeable.  ``trials`` further random transpositions are added.
    """
    P = frozenset(P)
    base = set(d.frame) | P
    window = sorted((base | set(fresh_atoms(base, 2))) - P)
    for a, b in combinations(window, 2):
        p = transposition(a, b)
        if not d.apply_perm(p).equivalent(d):
            return p
    rng = random.Random(seed)
    hi = max(base | set(window)) + 8
    outside = [a for a in range(hi) if a not in P]
    for _ in range(trials):
        a, b = rng.sample(outside, 2)
        p = transposition(a, b)
        if not d.apply_perm(p).equivalent(d):
            return p
    return None


def stabilizer_superset_check(d: FinSuppPredicate, P: Iterable[int], trials: int = 100, seed: int = 0) -> bool:
    return stabilizer_counterexample(d, P, trials, seed) is None
