"""Exhaustive evaluation over finite full structures.

The domain is ``{0, .., N-1}`` and a k-ary predicate variable ranges over
every subset of ``domain^k``.  This is the trusted baseline the nominal
evaluator and the generated formula families are checked against.

Predicate quantifiers are decided by a complete backtracking search: the body
is evaluated three-valuedly under a partially specified predicate, and the
search branches on the first tuple whose membership was asked but is not yet
fixed (``True`` first), fixing open tuples of enclosing predicates before
an inner search branches.  A subtree is closed as soon as its verdict no
longer depends on the open tuples, so the search covers every subset and
returns what plain bitmask enumeration returns.  The plain version
(``naive=True``) stays available for cross-checking on predicate spaces of
at most 2^16 subsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from operator import itemgetter
from typing import Mapping

from .logic.families import build_choice_instance
from .logic.syntax import And, Eq, Exists, Forall, Formula, Iff, Implies, Not, Or, Pred, conj, is_predicate, pred_arity

MAX_SIZE = 4
NAIVE_LIMIT = 16
_UNSET = object()


@dataclass(frozen=True)
class FiniteStructure:
    size: int

    def __post_init__(self):
        if not 1 <= self.size <= MAX_SIZE:
            raise ValueError(f"domain size must be between 1 and {MAX_SIZE}")

    @property
    def domain(self) -> range:
        return range(self.size)

    def tuples(self, k: int) -> list[tuple[int, ...]]:
        return list(product(range(self.size), repeat=k))

    def subsets(self, k: int):
        """All k-ary predicates as frozensets, in bitmask order over lexicographic tuples."""
        ts = self.tuples(k)
        if len(ts) > NAIVE_LIMIT:
            raise ValueError(f"2^{len(ts)} subsets is too many to enumerate")
        for mask in range(1 << len(ts)):
            yield frozenset(t for i, t in enumerate(ts) if mask >> i & 1)


class _NaiveEvaluator:
    """Plain recursive Tarski semantics with bitmask enumeration of predicates."""

    def __init__(self, S: FiniteStructure):
        self.S = S

    def ev(self, f: Formula, ind: dict, pred: dict) -> bool:
        t = type(f)
        if t is Eq:
            return ind[f.left] == ind[f.right]
        if t is Pred:
            return tuple(ind[a] for a in f.args) in pred[f.name]
        if t is Not:
            return not self.ev(f.body, ind, pred)
        if t is And:
            return all(self.ev(p, ind, pred) for p in f.parts)
        if t is Or:
            return any(self.ev(p, ind, pred) for p in f.parts)
        if t is Implies:
            return not self.ev(f.left, ind, pred) or self.ev(f.right, ind, pred)
        if t is Iff:
            return self.ev(f.left, ind, pred) == self.ev(f.right, ind, pred)
        if t is Forall or t is Exists:
            var = f.var
            if is_predicate(var):
                env, values = pred, self.S.subsets(pred_arity(var))
            else:
                env, values = ind, self.S.domain
            had, old = var in env, env.get(var)
            try:
                results = (self._bind(env, var, v, f.body, ind, pred) for v in values)
                return any(results) if t is Exists else all(results)
            finally:
                _restore(env, var, had, old)
        raise TypeError(f"not a formula: {f!r}")

    def _bind(self, env, var, value, body, ind, pred):
        env[var] = value
        return self.ev(body, ind, pred)


def miniscope(f: Formula) -> Formula:
    """Move guards that do not mention a quantified variable out of its scope.

    ``all x (a & b -> c)`` with x not free in a becomes ``a -> all x (b -> c)``
    and ``ex x (a & b)`` becomes ``a & ex x b``.  Both are equivalences in
    strong Kleene logic over a non-empty domain.
    """
    t = type(f)
    if t is Eq or t is Pred:
        return f
    if t is Not:
        return Not(miniscope(f.body))
    if t is And or t is Or:
        return t(tuple(miniscope(p) for p in f.parts))
    if t is Implies or t is Iff:
        return t(miniscope(f.left), miniscope(f.right))
    var, body = f.var, miniscope(f.body)
    if t is Forall and type(body) is Implies:
        guards = body.left.parts if type(body.left) is And else (body.left,)
        out = [g for g in guards if var not in g.free]
        if out:
            keep = [g for g in guards if var in g.free]
            inner = Implies(conj(*keep), body.right) if keep else body.right
            return Implies(conj(*out), miniscope(Forall(var, inner)))
    if t is Exists and type(body) is And:
        out = [g for g in body.parts if var not in g.free]
        if out:
            keep = [g for g in body.parts if var in g.free]
            if not keep:
                return body
            return conj(*out, miniscope(Exists(var, conj(*keep))))
    return t(var, body)


class _Search:
    """Three-valued evaluation by compiled closures, with predicate search.

    Predicate values are dicts from tuples to booleans; a tuple missing from
    the dict of a predicate under construction is open.  Search frame state:
    the predicate being built, its first open tuple, and the first open
    tuple belonging to an enclosing search.
    """

    def __init__(self, S: FiniteStructure):
        self.S = S
        self.current = None
        self.own = None
        self.outer = None

    def note(self, d: dict, tup):
        if d is self.current:
            if self.own is None:
                self.own = tup
        elif self.outer is None:
            self.outer = (d, tup)

    def compile(self, f: Formula):
        t = type(f)
        if t is Eq:
            a, b = f.left, f.right
            return lambda ind, pred: ind[a] == ind[b]
        if t is Pred:
            name, note = f.name, self.note
            if len(f.args) == 1:
                a0 = f.args[0]

                def key(ind):
                    return (ind[a0],)

            else:
                key = itemgetter(*f.args)

            def atom(ind, pred):
                d = pred[name]
                tup = key(ind)
                r = d.get(tup)
                if r is None:
                    note(d, tup)
                return r

            return atom
        if t is Not:
            g = self.compile(f.body)

            def neg(ind, pred):
                r = g(ind, pred)
                return None if r is None else not r

            return neg
        if t is And or t is Or:
            gs = [self.compile(p) for p in f.parts]
            decisive = t is Or

            def junction(ind, pred):
                unknown = False
                for g in gs:
                    r = g(ind, pred)
                    if r is decisive:
                        return decisive
                    if r is None:
                        unknown = True
                return None if unknown else not decisive

            return junction
        if t is Implies:
            ga, gc = self.compile(f.left), self.compile(f.right)

            def implies(ind, pred):
                a = ga(ind, pred)
                if a is False:
                    return True
                c = gc(ind, pred)
                if c is True:
                    return True
                return False if (a is True and c is False) else None

            return implies
        if t is Iff:
            ga, gc = self.compile(f.left), self.compile(f.right)

            def iff(ind, pred):
                a, c = ga(ind, pred), gc(ind, pred)
                return None if a is None or c is None else a == c

            return iff
        if t is Forall or t is Exists:
            is_exists = t is Exists
            var, g = f.var, self.compile(f.body)
            if var not in f.body.free:
                return g
            if is_predicate(var):
                return lambda ind, pred: self.pred_quantifier(var, g, is_exists, ind, pred)
            domain = self.S.domain

            def quant(ind, pred):
                old = ind.get(var, _UNSET)
                result = not is_exists
                for a in domain:
                    ind[var] = a
                    r = g(ind, pred)
                    if r is is_exists:
                        result = is_exists
                        break
                    if r is None:
                        result = None
                if old is _UNSET:
                    del ind[var]
                else:
                    ind[var] = old
                return result

            return quant
        raise TypeError(f"not a formula: {f!r}")

    def pred_quantifier(self, var, g, is_exists, ind, pred):
        had, old = var in pred, pred.get(var)
        part: dict = {}
        pred[var] = part
        try:
            return self.search(part, g, is_exists, ind, pred)
        finally:
            _restore(pred, var, had, old)

    def search(self, part: dict, g, is_exists, ind, pred):
        frame = self.current, self.own, self.outer
        self.current, self.own, self.outer = part, None, None
        try:
            r = g(ind, pred)
            own, outer = self.own, self.outer
        finally:
            self.current, self.own, self.outer = frame
        if r is not None:
            return r
        if outer is not None:
            # an enclosing search must fix its open tuple before this one branches
            self.note(*outer)
            return None
        unknown = False
        for value in (True, False):
            part[own] = value
            r = self.search(part, g, is_exists, ind, pred)
            del part[own]
            if r is is_exists:
                return is_exists
            if r is None:
                unknown = True
        return None if unknown else not is_exists


def _restore(env, var, had, old):
    if had:
        env[var] = old
    else:
        env.pop(var, None)


def eval_finite(
    S: FiniteStructure,
    F: Formula,
    ind: Mapping[str, int] | None = None,
    pred: Mapping[str, frozenset] | None = None,
    naive: bool = False,
) -> bool:
    ind = dict(ind or {})
    pred = {k: frozenset(map(tuple, v)) for k, v in (pred or {}).items()}
    for name, a in ind.items():
        if not 0 <= a < S.size:
            raise ValueError(f"atom {a} assigned to {name} is outside the domain of size {S.size}")
    for name, value in pred.items():
        k = pred_arity(name)
        for t in value:
            if len(t) != k or any(not 0 <= a < S.size for a in t):
                raise ValueError(f"tuple {t} of {name} is outside the domain of size {S.size}")
    missing = F.free - set(ind) - set(pred)
    if missing:
        raise KeyError(f"unbound variable(s) {sorted(missing)}")
    if naive:
        return _NaiveEvaluator(S).ev(F, ind, pred)
    total = {k: {t: t in v for t in S.tuples(pred_arity(k))} for k, v in pred.items()}
    r = _Search(S).compile(miniscope(F))(ind, total)
    if r is None:
        raise AssertionError("finite evaluation left an open query")
    return r


def finite_selector(S: FiniteStructure, H: Formula, n: int, m: int, alpha, params=None):
    """First-found witnesses: {xi . eta : xi in alpha, eta in D_xi}, or None if some xi has none."""
    x = [f"x{i}" for i in range(1, n + 1)]
    D = f"D{m}"
    ind_p, pred_p = params or ({}, {})
    sigma = set()
    for xi in sorted(alpha):
        ind = {**ind_p, **dict(zip(x, xi))}
        for cand in S.subsets(m):
            if eval_finite(S, H, ind, {**pred_p, D: cand}):
                sigma.update(xi + eta for eta in cand)
                break
        else:
            return None
    return frozenset(sigma)


def check_finite_choice(S: FiniteStructure, H: Formula, n: int, m: int, params=None) -> bool:
    """The guarded choice implication for every finite family alpha of n-tuples.

    For each alpha satisfying ``all x ex D (A x -> H)`` a selector S is built
    from first-found witnesses and the guarded consequent is evaluated with it.
    """
    inst = build_choice_instance(H, n, m, guard=f"A{n}_0")
    guard = f"A{n}_0"
    ind_p, pred_p = params or ({}, {})
    for alpha in S.subsets(n):
        env = {**pred_p, guard: alpha}
        if not eval_finite(S, inst.antecedent, ind_p, env):
            continue
        sigma = finite_selector(S, H, n, m, alpha, params)
        if sigma is None:
            return False
        body = inst.consequent.body  # all x ex D (A x -> ...), with S free
        if not eval_finite(S, body, ind_p, {**env, inst.S: sigma}):
            return False
    return True
