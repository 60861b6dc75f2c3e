"""Generators for the formula families used by the replay.

Vector conventions: ``x = (x1..xn)``, ``y = (y1..ym)``, the representative
tuple ``x0 = (x0_1..x0_n)`` and ``y0 = (y0_1..y0_m)``.  The order formulas
use vectors ``u``, ``v``, ``w``, ``z`` so they never clash with ``x``/``y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from ..partition import Cell, SetPartition
from .syntax import (
    Eq,
    Formula,
    FormulaError,
    Iff,
    Implies,
    Not,
    conj,
    disj,
    exists,
    forall,
    neq,
    pred,
    vec,
    vec_eq,
)


def beta_name(j: int) -> str:
    """Name of the unary variable bound to the j-th block of the adequate partition."""
    return f"B1_{j}"


# -- equality patterns and cells ---------------------------------------------


def build_pattern(K: SetPartition, n: int, xs: Sequence[str] | None = None) -> Formula:
    xs = tuple(xs) if xs is not None else vec("x", n)
    if any(i > n for i in K.ground):
        raise FormulaError(f"partition {K.to_lists()} mentions an index beyond {n}")
    if not K:
        return Eq(xs[0], xs[0])
    blocks = K.blocks
    if len(blocks) == 1 and len(blocks[0]) == 1:
        i = blocks[0][0]
        return Eq(xs[i - 1], xs[i - 1])
    parts: list[Formula] = []
    for b in blocks:
        parts.extend(Eq(xs[b[0] - 1], xs[i - 1]) for i in b[1:])
    for bv, bw in combinations(blocks, 2):
        parts.append(neq(xs[bv[0] - 1], xs[bw[0] - 1]))
    return conj(*parts)


def build_cell_formula(cell: Cell, xs: Sequence[str] | None = None) -> Formula:
    n = cell.n
    xs = tuple(xs) if xs is not None else vec("x", n)
    parts = [pred(beta_name(e), x) for e, x in zip(cell.e, xs)]
    parts.append(build_pattern(cell.K, n, xs))
    return conj(*parts)


# -- enumeration of new elements and the swap formula -------------------------


def build_enum(t: int, i: int, v: Sequence[str], w: Sequence[str]) -> Formula:
    """v_i is the t-th value of (v_1..v_i) not occurring in w."""
    n = len(v)
    if not 1 <= t <= i <= n:
        raise FormulaError(f"enum needs 1 <= t <= i <= n, got t={t}, i={i}, n={n}")
    vi = v[i - 1]

    def old(s: int, earlier: Sequence[int] = ()) -> Formula:
        return disj(*(Eq(v[s - 1], wj) for wj in w), *(Eq(v[s - 1], v[sj - 1]) for sj in earlier))

    if t == 1:
        parts = [neq(vi, wj) for wj in w]
        parts.extend(old(s) for s in range(1, i))
        return conj(*parts)
    options = []
    for earlier in combinations(range(1, i), t - 1):
        chosen = earlier + (i,)
        parts = [neq(v[s - 1], wj) for s in chosen for wj in w]
        parts.extend(neq(v[a - 1], v[b - 1]) for a, b in combinations(chosen, 2))
        parts.extend(old(s, earlier) for s in range(1, i) if s not in earlier)
        options.append(conj(*parts))
    return disj(*options)


def build_swap(e: Sequence[int], n: int, m: int, q: int) -> Formula:
    """Describes eta = pi_xi(eta0) given the representative x0 and the tuple x of one cell row."""
    if len(e) != n or any(not 1 <= x <= q + 1 for x in e):
        raise FormulaError(f"index vector {tuple(e)} invalid for n={n}, q={q}")
    x0, y0, x, y = vec("x0_", n), vec("y0_", m), vec("x", n), vec("y", m)
    idx = [j + 1 for j, ej in enumerate(e) if ej == q + 1]
    if not idx:
        return conj(vec_eq(x, x0), vec_eq(y, y0))
    per_k = []
    for k in range(m):
        yk, y0k = y[k], y0[k]
        unaffected = Implies(
            conj(*(conj(neq(y0k, x0[i - 1]), neq(y0k, x[i - 1])) for i in idx)),
            Eq(yk, y0k),
        )
        forward = conj(*(Implies(Eq(y0k, x0[i - 1]), Eq(yk, x[i - 1])) for i in idx))
        back = []
        for i in idx:
            # enum(t, i0, ...) is unsatisfiable for t > i0, so those disjuncts are left out
            options = [
                conj(build_enum(t, i, x, x0), build_enum(t, i0, x0, x), Eq(yk, x0[i0 - 1]))
                for t in range(1, i + 1)
                for i0 in range(t, n + 1)
            ]
            # only the first occurrence of a repeated new value triggers the clause;
            # enum is false at the later ones
            first = [neq(x[i - 1], x[s - 1]) for s in idx if s < i]
            back.append(
                Implies(conj(Eq(y0k, x[i - 1]), *(neq(x[i - 1], x0j) for x0j in x0), *first), disj(*options))
            )
        per_k.append(conj(unaffected, forward, *back))
    return conj(
        Implies(vec_eq(x, x0), vec_eq(y, y0)),
        Implies(Not(vec_eq(x, x0)), conj(*per_k)),
    )


# -- orders -------------------------------------------------------------------


def order_names(n: int) -> tuple[str, str, str]:
    """(T, A, B) variable names for the order formulas over n-tuples."""
    return f"T{2 * n}", f"A{n}", f"B{n}"


def order_conjuncts(n: int, T: str | None = None, A: str | None = None) -> dict[str, Formula]:
    if n < 1:
        raise FormulaError("arity must be positive")
    dT, dA, B = order_names(n)
    T, A = T or dT, A or dA
    u, v, w, z = vec("u", n), vec("v", n), vec("w", n), vec("z", n)

    def Tp(a, b):
        return pred(T, *a, *b)

    def Ap(a):
        return pred(A, *a)

    return {
        "reflexivity": forall(u, Implies(Ap(u), Tp(u, u))),
        "antisymmetry": forall(u + v, Implies(conj(Ap(u), Ap(v), Tp(u, v), Tp(v, u)), vec_eq(u, v))),
        "transitivity": forall(u + v + z, Implies(conj(Ap(u), Ap(v), Ap(z), Tp(u, v), Tp(v, z)), Tp(u, z))),
        "totality": forall(u + v, Implies(conj(Ap(u), Ap(v)), disj(Tp(u, v), Tp(v, u)))),
        "well-foundedness": forall(
            (B,),
            Implies(
                conj(forall(u, Implies(pred(B, *u), Ap(u))), exists(u, pred(B, *u))),
                exists(w, conj(pred(B, *w), forall(u, Implies(pred(B, *u), Tp(w, u))))),
            ),
        ),
    }


def build_po(n: int, T: str | None = None, A: str | None = None) -> Formula:
    c = order_conjuncts(n, T, A)
    return conj(c["reflexivity"], c["antisymmetry"], c["transitivity"])


def build_lo(n: int, T: str | None = None, A: str | None = None) -> Formula:
    c = order_conjuncts(n, T, A)
    return conj(build_po(n, T, A), c["totality"])


def build_wo(n: int, T: str | None = None, A: str | None = None) -> Formula:
    c = order_conjuncts(n, T, A)
    return conj(build_lo(n, T, A), c["well-foundedness"])


def build_WO(n: int) -> Formula:
    T, A, _ = order_names(n)
    return forall((A,), exists((T,), build_wo(n)))


def build_LO(n: int) -> Formula:
    T, A, _ = order_names(n)
    return forall((A,), exists((T,), build_lo(n)))


# -- the Ackermann choice schema ----------------------------------------------


@dataclass(frozen=True)
class ChoiceInstance:
    H: Formula
    n: int
    m: int
    antecedent: Formula
    consequent: Formula
    full: Formula
    matrix: Formula  # all y (D y <-> S x y) & H, possibly guarded

    @property
    def D(self) -> str:
        return f"D{self.m}"

    @property
    def S(self) -> str:
        return f"S{self.n + self.m}"


def build_choice_instance(H: Formula, n: int, m: int, guard: str | None = None) -> ChoiceInstance:
    """Antecedent, consequent and implication of the choice schema for H(x, D).

    With ``guard`` (an n-ary predicate variable A) both sides are relativised:
    ``all x ex D (A x -> H)`` implies ``ex S all x ex D (A x -> all y (D y <-> S x y) & H)``.
    """
    if n < 1 or m < 1:
        raise FormulaError("n and m must be positive")
    x, y = vec("x", n), vec("y", m)
    D, S = f"D{m}", f"S{n + m}"
    clash = H.free & (set(y) | {S})
    if clash:
        raise FormulaError(f"H uses reserved variable(s) {sorted(clash)} freely")
    if guard is not None and guard in H.free:
        raise FormulaError(f"guard {guard} occurs in H")
    graph = forall(y, Iff(pred(D, *y), pred(S, *x, *y)))
    matrix = conj(graph, H)
    if guard is not None:
        A = pred(guard, *x)
        antecedent = forall(x, exists((D,), Implies(A, H)))
        matrix = Implies(A, matrix)
    else:
        antecedent = forall(x, exists((D,), H))
    consequent = exists((S,), forall(x, exists((D,), matrix)))
    return ChoiceInstance(H, n, m, antecedent, consequent, Implies(antecedent, consequent), matrix)
