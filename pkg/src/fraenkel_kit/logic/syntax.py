"""Second-order formulas over a relational language with equality.

Variable names carry their sort: individual variables are lower-case
(``x1``, ``y0_2``); predicate variables are capitalised and end in their
arity, optionally followed by ``_<index>`` to tell apart several variables of
one arity (``A1``, ``T2``, ``B1_3`` is the third unary ``B``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

_IND_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
_PRED_RE = re.compile(r"[A-Z][A-Za-z]*?(\d+)(?:_\d+)?\Z")
KEYWORDS = frozenset({"all", "ex"})


class FormulaError(ValueError):
    pass


class ArityError(FormulaError):
    def __init__(self, name: str, expected: int, got: int):
        super().__init__(f"arity mismatch: {name} is {expected}-ary but applied to {got} argument(s)")
        self.name = name


def is_individual(name: str) -> bool:
    return bool(_IND_RE.match(name)) and name not in KEYWORDS


def is_predicate(name: str) -> bool:
    return bool(_PRED_RE.match(name))


def pred_arity(name: str) -> int:
    m = _PRED_RE.match(name)
    if not m:
        raise FormulaError(f"not a predicate variable: {name!r}")
    return int(m.group(1))


def _check_ind(name: str) -> None:
    if not is_individual(name):
        raise FormulaError(f"not an individual variable: {name!r}")


class Formula:
    __slots__ = ()

    @cached_property
    def free(self) -> frozenset[str]:
        return self._free()

    def _free(self) -> frozenset[str]:
        raise NotImplementedError

    @cached_property
    def free_individuals(self) -> frozenset[str]:
        return frozenset(v for v in self.free if is_individual(v))

    @cached_property
    def free_predicates(self) -> frozenset[str]:
        return frozenset(v for v in self.free if is_predicate(v))

    def variables(self) -> frozenset[str]:
        """Every variable occurring, free or bound."""
        out: set[str] = set()
        for node in self.walk():
            if isinstance(node, Eq):
                out.update((node.left, node.right))
            elif isinstance(node, Pred):
                out.add(node.name)
                out.update(node.args)
            elif isinstance(node, (Forall, Exists)):
                out.add(node.var)
        return frozenset(out)

    def walk(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children())

    def children(self) -> tuple[Formula, ...]:
        return ()

    def __str__(self):
        from .parser import to_text

        return to_text(self)


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str

    def __post_init__(self):
        _check_ind(self.left)
        _check_ind(self.right)

    def _free(self):
        return frozenset((self.left, self.right))


@dataclass(frozen=True)
class Pred(Formula):
    name: str
    args: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        k = pred_arity(self.name)
        if len(self.args) != k:
            raise ArityError(self.name, k, len(self.args))
        for a in self.args:
            _check_ind(a)

    def _free(self):
        return frozenset(self.args) | {self.name}


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    def _free(self):
        return self.body.free

    def children(self):
        return (self.body,)


class _Junction(Formula):
    parts: tuple[Formula, ...]

    def __post_init__(self):
        flat: list[Formula] = []
        for p in self.parts:
            flat.extend(p.parts if type(p) is type(self) else (p,))
        if len(flat) < 2:
            raise FormulaError(f"{type(self).__name__} needs at least two parts")
        object.__setattr__(self, "parts", tuple(flat))

    def _free(self):
        return frozenset().union(*(p.free for p in self.parts))

    def children(self):
        return self.parts


@dataclass(frozen=True)
class And(_Junction):
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(_Junction):
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def _free(self):
        return self.left.free | self.right.free

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula

    def _free(self):
        return self.left.free | self.right.free

    def children(self):
        return (self.left, self.right)


class _Quantifier(Formula):
    var: str
    body: Formula

    def __post_init__(self):
        if not (is_individual(self.var) or is_predicate(self.var)):
            raise FormulaError(f"cannot quantify {self.var!r}")

    @property
    def second_order(self) -> bool:
        return is_predicate(self.var)

    def _free(self):
        return self.body.free - {self.var}

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Forall(_Quantifier):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(_Quantifier):
    var: str
    body: Formula


# -- smart constructors ------------------------------------------------------


def conj(*parts: Formula) -> Formula:
    if not parts:
        raise FormulaError("empty conjunction")
    return parts[0] if len(parts) == 1 else And(parts)


def disj(*parts: Formula) -> Formula:
    if not parts:
        raise FormulaError("empty disjunction")
    return parts[0] if len(parts) == 1 else Or(parts)


def neq(a: str, b: str) -> Formula:
    return Not(Eq(a, b))


def vec(base: str, n: int) -> tuple[str, ...]:
    """Variable vector ``base1 .. base<n>``."""
    return tuple(f"{base}{i}" for i in range(1, n + 1))


def vec_eq(xs: Iterable[str], ys: Iterable[str]) -> Formula:
    return conj(*(Eq(a, b) for a, b in zip(xs, ys, strict=True)))


def forall(vars: Iterable[str], body: Formula) -> Formula:
    for v in reversed(tuple(vars)):
        body = Forall(v, body)
    return body


def exists(vars: Iterable[str], body: Formula) -> Formula:
    for v in reversed(tuple(vars)):
        body = Exists(v, body)
    return body


def pred(name: str, *args: str) -> Pred:
    return Pred(name, tuple(args))

