"""Three-valued evaluation of formulas in the permutation model.

First-order quantifiers are decided exactly: every atom outside the atoms
supporting the body's other free values lies in a single orbit of their
stabilizer, so the supporting atoms plus one fresh atom cover all cases.
Predicate quantifiers range over infinitely many values and are searched
within :class:`Bounds`; a failed search yields ``unknown``, never a guess.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping

from .atoms import FinPerm, fresh_atoms
from .logic.syntax import And, Eq, Exists, Forall, Formula, Iff, Implies, Not, Or, Pred, is_predicate, pred_arity
from .nominal import FinSuppPredicate
from .partition import enumerate_cells


class UnboundVariableError(KeyError):
    pass


@dataclass(frozen=True)
class Bounds:
    """Search bounds for predicate quantifiers.

    Candidate witnesses have frames drawn from the atoms already in play plus
    the first ``max_extra_fresh`` fresh atoms, with at most ``max_support``
    atoms in total.
    """

    max_extra_fresh: int = 1
    max_support: int = 2

    def __post_init__(self):
        if self.max_extra_fresh < 0 or self.max_support < 0:
            raise ValueError("bounds must be non-negative")

    def __le__(self, other: Bounds) -> bool:
        return self.max_extra_fresh <= other.max_extra_fresh and self.max_support <= other.max_support

    def to_json(self) -> dict:
        return {"max_extra_fresh": self.max_extra_fresh, "max_support": self.max_support}


@dataclass(frozen=True)
class TriBool:
    value: bool | None
    bound: Bounds | None = None

    @property
    def is_true(self) -> bool:
        return self.value is True

    @property
    def is_false(self) -> bool:
        return self.value is False

    @property
    def is_unknown(self) -> bool:
        return self.value is None

    def __bool__(self):
        raise TypeError("TriBool has no truth value; use is_true / is_false")

    def __str__(self):
        if self.value is None:
            return f"unknown(max_extra_fresh={self.bound.max_extra_fresh}, max_support={self.bound.max_support})"
        return "true" if self.value else "false"


TRUE = TriBool(True)
FALSE = TriBool(False)


@dataclass(frozen=True)
class Assignment:
    ind: Mapping[str, int] = field(default_factory=dict)
    pred: Mapping[str, FinSuppPredicate] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ind", dict(self.ind))
        object.__setattr__(self, "pred", dict(self.pred))
        for name, value in self.pred.items():
            if pred_arity(name) != value.arity:
                raise ValueError(f"{name} is {pred_arity(name)}-ary but assigned a {value.arity}-ary predicate")

    def bind(self, ind: Mapping[str, int] | None = None, pred: Mapping[str, FinSuppPredicate] | None = None) -> Assignment:
        return Assignment({**self.ind, **(ind or {})}, {**self.pred, **(pred or {})})

    def permuted(self, p: FinPerm) -> Assignment:
        return Assignment({k: p(a) for k, a in self.ind.items()}, {k: d.apply_perm(p) for k, d in self.pred.items()})

    def atoms(self, names=None) -> set[int]:
        """Atoms in play for the given variables (all assigned ones by default)."""
        out: set[int] = set()
        for k, a in self.ind.items():
            if names is None or k in names:
                out.add(a)
        for k, d in self.pred.items():
            if names is None or k in names:
                out.update(d.frame)
        return out


def enumerate_predicates(S, m: int, b: Bounds) -> Iterator[FinSuppPredicate]:
    """Candidate m-ary predicates within the bounds, in a fixed order.

    Frames are subsets of ``S`` plus the first ``b.max_extra_fresh`` atoms
    outside ``S``, of size at most ``b.max_support``.  Predicates are listed
    by the number of infinite cells they contain, then frame (size, then
    lexicographic), then cell subset, so predicates with small extensions
    come first.  Each (frame, cell set) pair appears once.
    """
    S = sorted(set(S))
    pool = sorted(S + list(fresh_atoms(S, b.max_extra_fresh)))
    frames = [f for k in range(min(b.max_support, len(pool)) + 1) for f in combinations(pool, k)]
    split = []
    for f in frames:
        cells = enumerate_cells(m, len(f))
        split.append((f, [c for c in cells if c.is_finite], [c for c in cells if not c.is_finite]))
    max_inf = max(len(inf) for _, _, inf in split)
    for k_inf in range(max_inf + 1):
        for f, fin, inf in split:
            for chosen in combinations(inf, k_inf):
                for mask in range(1 << len(fin)):
                    cells = [c for i, c in enumerate(fin) if mask >> i & 1]
                    yield FinSuppPredicate(m, f, frozenset(cells + list(chosen)))


class _Evaluator:
    def __init__(self, bounds: Bounds):
        self.bounds = bounds

    def relevant_atoms(self, body: Formula, bound_var: str, ind, pred) -> set[int]:
        out = set()
        for v in body.free_individuals:
            if v != bound_var:
                out.add(self.lookup(ind, v))
        for v in body.free_predicates:
            if v != bound_var:
                out.update(self.lookup(pred, v).frame)
        return out

    @staticmethod
    def lookup(env, name):
        try:
            return env[name]
        except KeyError:
            raise UnboundVariableError(f"unbound variable {name}") from None

    def ev(self, f: Formula, ind: dict, pred: dict) -> bool | None:
        t = type(f)
        if t is Eq:
            return self.lookup(ind, f.left) == self.lookup(ind, f.right)
        if t is Pred:
            d = self.lookup(pred, f.name)
            return d.contains(tuple(self.lookup(ind, a) for a in f.args))
        if t is Not:
            r = self.ev(f.body, ind, pred)
            return None if r is None else not r
        if t is And:
            unknown = False
            for p in f.parts:
                r = self.ev(p, ind, pred)
                if r is False:
                    return False
                if r is None:
                    unknown = True
            return None if unknown else True
        if t is Or:
            unknown = False
            for p in f.parts:
                r = self.ev(p, ind, pred)
                if r is True:
                    return True
                if r is None:
                    unknown = True
            return None if unknown else False
        if t is Implies:
            a = self.ev(f.left, ind, pred)
            if a is False:
                return True
            c = self.ev(f.right, ind, pred)
            if c is True:
                return True
            if a is True and c is False:
                return False
            return None
        if t is Iff:
            a = self.ev(f.left, ind, pred)
            if a is None:
                return None
            c = self.ev(f.right, ind, pred)
            return None if c is None else a == c
        if t is Forall or t is Exists:
            return self.quantifier(f, t is Exists, ind, pred)
        raise TypeError(f"not a formula: {f!r}")

    def quantifier(self, f, is_exists: bool, ind: dict, pred: dict) -> bool | None:
        var, body = f.var, f.body
        if var not in body.free:
            return self.ev(body, ind, pred)
        S = self.relevant_atoms(body, var, ind, pred)
        if is_predicate(var):
            env, candidates = pred, enumerate_predicates(S, pred_arity(var), self.bounds)
            exhaustive = False
        else:
            env, candidates = ind, sorted(S) + list(fresh_atoms(S, 1))
            exhaustive = True
        had, old = var in env, env.get(var)
        unknown = False
        try:
            for value in candidates:
                env[var] = value
                r = self.ev(body, ind, pred)
                if r is is_exists:
                    return is_exists
                if r is None:
                    unknown = True
        finally:
            if had:
                env[var] = old
            else:
                env.pop(var, None)
        if unknown or not exhaustive:
            return None
        return not is_exists


def eval_nominal(F: Formula, f: Assignment | None = None, b: Bounds | None = None) -> TriBool:
    b = b or Bounds()
    f = f or Assignment()
    r = _Evaluator(b).ev(F, dict(f.ind), dict(f.pred))
    if r is None:
        return TriBool(None, b)
    return TRUE if r else FALSE
