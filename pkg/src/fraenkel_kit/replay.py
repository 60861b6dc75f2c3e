"""Replaying the choice construction in the basic Fraenkel model, and the LO refutation.

The construction for ``all x ex D H(x, D)``:

* P supports the parameters of H and mu is the n least atoms outside P;
* every cell of n-tuples over P gets a representative and a first-found
  witness delta at that representative;
* sigma_{e,K} collects ``xi . eta`` for xi in the cell and eta in delta
  moved along the transporter of xi;
* sigma is the union of the sigma_{e,K}, supported by P, mu and the witness
  frames P0.

``verify_choice_instance`` then evaluates the consequent with S bound to
sigma, taking the y-section of sigma at x as the witness for D.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable

from .atoms import fresh_atoms, transposition
from .evaluation import Assignment, Bounds, enumerate_predicates, eval_nominal
from .logic.families import build_choice_instance, build_lo, build_swap, build_WO, build_wo, order_conjuncts
from .logic.parser import parse, to_text
from .logic.syntax import Formula, Iff, Implies, Not, conj, exists, forall, pred, vec
from .nominal import (
    FinSuppPredicate,
    SupportError,
    choice_set_predicate,
    empty,
    from_semantic,
    full,
    stabilizer_counterexample,
    union_all,
)
from .oracle import FiniteStructure, check_finite_choice, eval_finite
from .partition import (
    Cell,
    bell,
    cell_from_key,
    classify,
    count_cells,
    default_mu,
    enumerate_cells,
    enumerate_partitions,
    make_frame,
    representative,
)
from .transporter import transport_perm


class ReplayError(RuntimeError):
    pass


# H formulas shipped with the tool: (text, n, m).  Bound variables are z1 so
# that y1 stays free for the graph clause of the consequent.
CATALOG: dict[str, tuple[str, int, int]] = {
    "member": ("D1 x1", 1, 1),
    "non-member": ("~D1 x1", 1, 1),
    "singleton": ("all z1 (D1 z1 <-> z1 = x1)", 1, 1),
    "other": ("ex z1 (D1 z1 & ~z1 = x1)", 1, 1),
    "member-or-equal": ("D1 x1 | x1 = x2", 2, 1),
}


def catalog_formula(key_or_text: str) -> Formula:
    if key_or_text in CATALOG:
        return parse(CATALOG[key_or_text][0])
    return parse(key_or_text)


def catalog_cases() -> list[tuple[str, str, int, int]]:
    """(key, H, n, m) for every catalog entry at n in {1, 2}, m = 1."""
    out = []
    for key, (text, n0, m) in CATALOG.items():
        for n in (1, 2):
            if n >= n0:
                out.append((key, text, n, m))
    return out


# -- the construction ---------------------------------------------------------


def compute_support(H: Formula, f: Assignment | None = None) -> tuple[int, ...]:
    f = f or Assignment()
    params = {v for v in H.free if not _is_xd(v)}
    return make_frame(f.atoms(params))


def _is_xd(name: str) -> bool:
    # x1, x2, ... and D1, D2, ... are the schema's own variables
    return (name[0] in "xD") and name[1:].isdigit()


@dataclass(frozen=True)
class ChoiceEntry:
    cell: Cell
    representative: tuple[int, ...]
    witness: FinSuppPredicate

    @property
    def witness_frame(self) -> tuple[int, ...]:
        return self.witness.frame


@dataclass(frozen=True)
class ChoiceTable:
    H: Formula
    n: int
    m: int
    frame: tuple[int, ...]
    mu: tuple[int, ...]
    entries: dict
    assignment: Assignment = field(default_factory=Assignment)

    @property
    def P0(self) -> tuple[int, ...]:
        return make_frame(a for e in self.entries.values() for a in e.witness_frame)

    @property
    def full_frame(self) -> tuple[int, ...]:
        return make_frame(self.frame + self.mu + self.P0)

    def entry_for(self, xi) -> ChoiceEntry:
        return self.entries[classify(xi, self.frame)]


def _holds(H: Formula, f: Assignment, xi, D: FinSuppPredicate, b: Bounds):
    n = len(xi)
    return eval_nominal(H, f.bind(dict(zip(vec("x", n), xi)), {f"D{D.arity}": D}), b)


def build_choice_table(
    H: Formula, n: int, m: int, f: Assignment | None = None, P=None, b: Bounds | None = None
) -> ChoiceTable:
    f = f or Assignment()
    b = b or Bounds()
    P = make_frame(P) if P is not None else compute_support(H, f)
    antecedent = build_choice_instance(H, n, m).antecedent
    verdict = eval_nominal(antecedent, f, b)
    if verdict.is_false:
        raise ReplayError("antecedent fails")
    if verdict.is_unknown:
        raise ReplayError("no witness within bounds")
    mu = default_mu(P, n)
    S = set(P) | set(mu)
    entries = {}
    for cell in enumerate_cells(n, len(P)):
        rep = representative(P, mu, cell)
        for delta in enumerate_predicates(S, m, b):
            if _holds(H, f, rep, delta, b).is_true:
                entries[cell] = ChoiceEntry(cell, rep, delta)
                break
        else:
            raise ReplayError("no witness within bounds")
    return ChoiceTable(H, n, m, P, mu, entries, f)


def transported_witness(table: ChoiceTable, xi) -> FinSuppPredicate:
    """delta at the representative of xi's cell, moved along the transporter of xi."""
    entry = table.entry_for(xi)
    plan = transport_perm(table.frame, table.mu, entry.cell, xi)
    return entry.witness.apply_perm(plan.perm)


def sigma_member(table: ChoiceTable, cell: Cell | None = None) -> Callable[[tuple], bool]:
    """Membership test of sigma_{e,K} (or of sigma when cell is None)."""
    n = table.n

    def member(t):
        xi, eta = tuple(t[:n]), tuple(t[n:])
        c = classify(xi, table.frame)
        if cell is not None and c != cell:
            return False
        entry = table.entries[c]
        plan = transport_perm(table.frame, table.mu, c, xi)
        return entry.witness.apply_perm(plan.perm).contains(eta)

    return member


@dataclass(frozen=True)
class SigmaParts:
    sigma0: FinSuppPredicate
    pieces: dict
    sigma: FinSuppPredicate


def build_sigma(table: ChoiceTable, seed: int = 0) -> SigmaParts:
    k = table.n + table.m
    pieces = {}
    for cell, entry in table.entries.items():
        frame = make_frame(table.frame + table.mu + entry.witness_frame)
        pieces[cell] = from_semantic(k, frame, sigma_member(table, cell), seed=seed)
    sigma = union_all(pieces.values(), k)
    reps = {e.representative: e.witness for e in table.entries.values()}

    def in_sigma0(t):
        d = reps.get(tuple(t[: table.n]))
        return d is not None and d.contains(tuple(t[table.n :]))

    sigma0 = from_semantic(k, table.full_frame, in_sigma0, seed=seed)
    return SigmaParts(sigma0, pieces, sigma)


def orbit_tuples(S: Iterable[int], n: int):
    """One n-tuple from each orbit of the stabilizer of S (new atoms are the least fresh ones)."""
    S = sorted(set(S))

    def go(prefix, seen):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        used = sorted(seen)
        for a in used + [fresh_atoms(used, 1)[0]]:
            yield from go(prefix + [a], seen | {a})

    yield from go([], frozenset(S))


def semantic_invariance_counterexample(member, arity: int, frame, trials: int = 100, seed: int = 0):
    """A transposition g fixing ``frame`` and a tuple t with member(g t) != member(t)."""
    frame = set(frame)
    rng = random.Random(seed)
    hi = max(frame | {0}) + 2 * arity + 4
    outside = [a for a in range(hi) if a not in frame]
    pool = sorted(frame) + outside
    for _ in range(trials):
        a, b = rng.sample(outside, 2)
        t = tuple(rng.choice(pool) for _ in range(arity))
        g = transposition(a, b)
        if bool(member(g.apply_tuple(t))) != bool(member(t)):
            return g, t
    return None


@dataclass
class ReplayReport:
    H: str
    n: int
    m: int
    P: tuple
    mu: tuple
    P0: tuple
    cells: list
    sigma0: FinSuppPredicate | None
    sigma: FinSuppPredicate
    antecedent: str
    consequent: str
    failing_x: tuple | None
    stabilizer: bool
    stabilizer_counterexample: str | None
    sigma_extends_sigma0: bool
    sabotaged: bool = False
    millis: float | None = None

    @property
    def passed(self) -> bool:
        return self.consequent == "true" and self.stabilizer and self.sigma_extends_sigma0

    def to_json(self) -> dict:
        return {
            "H": self.H,
            "n": self.n,
            "m": self.m,
            "P": list(self.P),
            "mu": list(self.mu),
            "P0": list(self.P0),
            "cells": self.cells,
            "sigma0": self.sigma0.to_json() if self.sigma0 else None,
            "sigma": self.sigma.to_json(),
            "antecedent": self.antecedent,
            "consequent": self.consequent,
            "failing_x": list(self.failing_x) if self.failing_x else None,
            "stabilizer": self.stabilizer,
            "stabilizer_counterexample": self.stabilizer_counterexample,
            "sigma_extends_sigma0": self.sigma_extends_sigma0,
            "sabotaged": self.sabotaged,
            "passed": self.passed,
            "millis": self.millis,
        }


def verify_choice_instance(
    H: Formula, n: int, m: int, sigma: FinSuppPredicate, f: Assignment | None = None, b: Bounds | None = None
):
    """Evaluate ``all x ex D (all y (D y <-> S x y) & H)`` with S bound to sigma.

    x runs over one tuple per orbit of the stabilizer of the atoms in play,
    which is exact.  The graph clause pins D down to the section of sigma at
    x, so using that section as the witness decides the inner quantifier.
    Returns (verdict, first failing x).
    """
    f = f or Assignment()
    b = b or Bounds()
    inst = build_choice_instance(H, n, m)
    S = set(sigma.frame) | set(compute_support(H, f))
    xs = vec("x", n)
    unknown = None
    for xi in orbit_tuples(S, n):
        g = f.bind(dict(zip(xs, xi)), {inst.S: sigma, inst.D: sigma.section(xi)})
        r = eval_nominal(inst.matrix, g, b)
        if r.is_false:
            return "false", xi
        if r.is_unknown and unknown is None:
            unknown = xi
    return ("unknown", unknown) if unknown else ("true", None)


def replay(
    H: Formula | str,
    n: int,
    m: int,
    f: Assignment | None = None,
    b: Bounds | None = None,
    sabotage: bool = False,
    seed: int = 0,
    timings: bool = False,
) -> ReplayReport:
    start = time.perf_counter()
    H = catalog_formula(H) if isinstance(H, str) else H
    f = f or Assignment()
    b = b or Bounds()
    table = build_choice_table(H, n, m, f, b=b)
    parts = build_sigma(table, seed=seed)
    sigma = empty(n + m) if sabotage else parts.sigma
    frame = table.full_frame
    verdict, failing = verify_choice_instance(H, n, m, sigma, f, b)
    cx = stabilizer_counterexample(sigma, frame, seed=seed)
    member = (lambda t: False) if sabotage else sigma_member(table)
    sem = semantic_invariance_counterexample(member, n + m, frame, seed=seed)
    faithful = _reification_counterexample(sigma, member, frame, seed)
    stab_note = None
    if cx is not None:
        stab_note = f"transposition {cx} moves sigma"
    elif sem is not None:
        stab_note = f"transposition {sem[0]} changes membership of {sem[1]}"
    elif faithful is not None:
        stab_note = f"reified sigma disagrees with its definition at {faithful}"
    extends = all(
        sigma.section(e.representative).equivalent(parts.sigma0.section(e.representative))
        for e in table.entries.values()
    )
    cells = [
        {
            "cell": c.key(),
            "representative": list(e.representative),
            "witness": e.witness.to_json(),
            "sigma_eK": parts.pieces[c].to_json(),
        }
        for c, e in sorted(table.entries.items())
    ]
    return ReplayReport(
        H=to_text(H),
        n=n,
        m=m,
        P=table.frame,
        mu=table.mu,
        P0=table.P0,
        cells=cells,
        sigma0=parts.sigma0,
        sigma=sigma,
        antecedent="true",
        consequent=verdict,
        failing_x=failing,
        stabilizer=stab_note is None,
        stabilizer_counterexample=stab_note,
        sigma_extends_sigma0=extends,
        sabotaged=sabotage,
        millis=round((time.perf_counter() - start) * 1000, 3) if timings else None,
    )


def _reification_counterexample(sigma: FinSuppPredicate, member, frame, seed: int, trials: int = 100):
    rng = random.Random(seed + 1)
    k = sigma.arity
    pool = sorted(frame) + list(fresh_atoms(frame, 2 * k))
    for _ in range(trials):
        t = tuple(rng.choice(pool) for _ in range(k))
        if sigma.contains(t) != bool(member(t)):
            return t
    return None


def transported_witness_counterexample(table: ChoiceTable, samples: int = 20, seed: int = 0, b: Bounds | None = None):
    """A sampled xi where the transported witness fails H, or None."""
    rng = random.Random(seed)
    b = b or Bounds()
    pool = list(table.frame) + list(fresh_atoms(table.frame, 2 * table.n + 2))
    for _ in range(samples):
        xi = tuple(rng.choice(pool) for _ in range(table.n))
        if not _holds(table.H, table.assignment, xi, transported_witness(table, xi), b).is_true:
            return xi
    return None


# -- refuting linear orders ---------------------------------------------------


@dataclass(frozen=True)
class LORefutation:
    pair: tuple[int, int]
    present: bool  # whether (a, b) and (b, a) are both in tau

    @property
    def violated(self) -> str:
        return "antisymmetry" if self.present else "totality"


def refute_linear_order(tau: FinSuppPredicate) -> LORefutation:
    """Two distinct fresh atoms a, b with tau(a, b) == tau(b, a).

    (a, b) and (b, a) lie in the same cell, the one with both coordinates
    fresh and distinct, so tau cannot separate them.
    """
    if tau.arity != 2:
        raise ValueError("a binary predicate is needed")
    a, b = fresh_atoms(tau.frame, 2)
    ab, ba = tau.contains((a, b)), tau.contains((b, a))
    if ab != ba:
        raise AssertionError(f"cell symmetry broken at ({a}, {b})")
    return LORefutation((a, b), ab)


def _lo_formula():
    return build_lo(1, "T2", "A1")


def lo_counterexample_holds(tau: FinSuppPredicate, ref: LORefutation, b: Bounds | None = None) -> bool:
    """The violated conjunct is false under eval_nominal at tau with A = all atoms."""
    conjunct = order_conjuncts(1, "T2", "A1")[ref.violated]
    return eval_nominal(conjunct, Assignment({}, {"T2": tau, "A1": full(1)}), b).is_false


def _pair_cell(q: int) -> Cell:
    return cell_from_key(f"e=[{q + 1},{q + 1}];K=[[1],[2]]", q)


def check_not_LO1(max_q: int, max_support: int | None = None, probe_bounds=None) -> dict:
    """Case analysis, bounded sweep and soundness probe for "no linear order of all atoms"."""
    if max_q < 0:
        raise ValueError("max_q must be non-negative")
    max_support = max_q if max_support is None else max_support
    lo = _lo_formula()
    A = {"A1": full(1)}
    cases = []
    for q in range(max_q + 1):
        frame = tuple(range(q))
        pc = _pair_cell(q)
        others = [c for c in enumerate_cells(2, q) if c != pc]
        for present in (True, False):
            # the pair cell alone decides; check it against both extremes of the other cells
            ok = True
            for rest in ((), tuple(others)):
                tau = FinSuppPredicate(2, frame, frozenset(rest + ((pc,) if present else ())))
                ref = refute_linear_order(tau)
                ok &= ref.present == present and lo_counterexample_holds(tau, ref)
            cases.append(
                {
                    "q": q,
                    "pair_cell": "present" if present else "absent",
                    "violated": "antisymmetry" if present else "totality",
                    "refuted": ok,
                }
            )
    swept = survivors = 0
    first_survivor = None
    for tau in enumerate_predicates(set(), 2, Bounds(max_q, max_support)):
        swept += 1
        ref = refute_linear_order(tau)
        if not eval_nominal(lo, Assignment({}, {"T2": tau, **A})).is_false:
            survivors += 1
            first_survivor = first_survivor or tau.to_json()
    probe = exists(("T2",), lo)
    probes = []
    for pb in probe_bounds or (Bounds(0, 0), Bounds(1, 1), Bounds(1, 2), Bounds(2, 2)):
        probes.append({"bounds": pb.to_json(), "verdict": str(eval_nominal(probe, Assignment({}, A), pb).value).lower()})
    probe_ok = all(p["verdict"] != "true" for p in probes)
    return {
        "max_q": max_q,
        "cases": cases,
        "swept": swept,
        "survivors": survivors,
        "first_survivor": first_survivor,
        "probes": probes,
        "passed": all(c["refuted"] for c in cases) and survivors == 0 and probe_ok,
    }


def wo_implies_lo_finite(size: int = 3) -> bool:
    """wo(T, A) -> lo(T, A) for every T and A over a finite domain."""
    F = forall(("A1", "T2"), Implies(build_wo(1), build_lo(1)))
    return eval_finite(FiniteStructure(size), F)


def not_WO1_evidence(max_q: int = 3, size: int = 3) -> dict:
    lo = check_not_LO1(max_q)
    implication = wo_implies_lo_finite(size)
    chain = [
        f"no binary predicate linearly orders all atoms: {len(lo['cases'])} fresh-pair cases refuted, "
        f"{lo['swept']} predicates swept (max_q={max_q}), {lo['survivors']} survivors",
        f"wo(T, A) -> lo(T, A) holds for all T, A on every domain of size <= {size}",
        "hence no binary predicate well-orders all atoms, so WO1 fails in the model",
    ]
    return {"not_LO1": lo, "wo_implies_lo": implication, "chain": chain, "passed": lo["passed"] and implication}


# -- suites -------------------------------------------------------------------


SUITES = ("partitions", "choice-set", "transporter", "swap", "finite-choice", "prop41", "replay", "lo-refuter")


@dataclass
class SuiteOptions:
    seed: int = 0
    bounds: Bounds = field(default_factory=Bounds)
    max_q: int = 3
    size: int = 3
    samples: int | None = None
    timings: bool = False


def _case(name, ok, witness=None, millis=None):
    out = {"name": name, "verdict": "pass" if ok else "fail"}
    if witness is not None:
        out["witness"] = witness
    out["millis"] = millis
    return out


class _Cases:
    def __init__(self, timings: bool):
        self.timings = timings
        self.items = []

    def run(self, name: str, check: Callable[[], object]):
        """check returns True, False, or (ok, witness)."""
        start = time.perf_counter()
        r = check()
        ok, witness = r if isinstance(r, tuple) else (r, None)
        ms = round((time.perf_counter() - start) * 1000, 3) if self.timings else None
        self.items.append(_case(name, bool(ok), witness, ms))


def _suite_partitions(c: _Cases, o: SuiteOptions):
    for k in range(7):
        c.run(f"bell-{k}", lambda k=k: len(enumerate_partitions(range(1, k + 1))) == bell(k))
    c.run("bell-values", lambda: [bell(k) for k in range(6)] == [1, 1, 2, 5, 15, 52])
    c.run("cells-2-1", lambda: len(enumerate_cells(2, 1)) == 5)
    c.run("cells-3-0", lambda: len(enumerate_cells(3, 0)) == 5)

    def counts():
        for n in range(1, 5):
            for q in range(4):
                if len(enumerate_cells(n, q)) != count_cells(n, q):
                    return False, {"n": n, "q": q}
        return True

    c.run("cell-count-formula", counts)

    def reps_classify():
        for n in range(1, 4):
            for q in range(4):
                frame = tuple(range(0, 2 * q, 2))
                mu = default_mu(frame, n)
                for cell in enumerate_cells(n, q):
                    if classify(representative(frame, mu, cell), frame) != cell:
                        return False, cell.key()
                    if cell_from_key(cell.key(), q) != cell:
                        return False, cell.key()
        return True

    c.run("representatives-classify", reps_classify)

    def exactly_one():
        rng = random.Random(o.seed)
        for _ in range(o.samples or 1000):
            n, q = rng.randint(1, 4), rng.randint(0, 3)
            frame = tuple(sorted(rng.sample(range(20), q)))
            t = tuple(rng.randrange(20) for _ in range(n))
            cell = classify(t, frame)
            hits = [x for x in enumerate_cells(n, q) if _in_cell(t, frame, x)]
            if hits != [cell]:
                return False, {"tuple": list(t), "frame": list(frame)}
        return True

    c.run("exactly-one-cell", exactly_one)


def _in_cell(t, frame, cell: Cell) -> bool:
    """Direct reading of the cell condition, independent of classify."""
    q = len(frame)
    for j, x in enumerate(cell.e):
        if x <= q and t[j] != frame[x - 1]:
            return False
        if x == q + 1 and t[j] in frame:
            return False
    for i, j in combinations(sorted(cell.idx), 2):
        if (t[i - 1] == t[j - 1]) != (cell.K.block_of(i) == cell.K.block_of(j)):
            return False
    return True


def _suite_choice_set(c: _Cases, o: SuiteOptions):
    for n in range(1, 4):
        for q in range(4):

            def check(n=n, q=q):
                frame = tuple(range(1, 2 * q + 1, 2))
                mu = default_mu(frame, n)
                d = choice_set_predicate(frame, mu, n)
                ext = d.extension()
                cells = {classify(t, frame) for t in ext}
                if len(ext) != count_cells(n, q) or cells != set(enumerate_cells(n, q)):
                    return False, {"extension": sorted(map(list, ext))}
                cx = stabilizer_counterexample(d, frame + mu, trials=100, seed=o.seed)
                return (True, None) if cx is None else (False, str(cx))

            c.run(f"n={n},q={q}", check)


def _random_cell_member(rng, n, q):
    frame = tuple(sorted(rng.sample(range(12), q)))
    t = tuple(rng.choice(list(frame) + list(range(12, 12 + n)) + list(range(12))) for _ in range(n))
    return frame, classify(t, frame), t


def _suite_transporter(c: _Cases, o: SuiteOptions):
    def check():
        rng = random.Random(o.seed)
        for _ in range(o.samples or 500):
            frame, cell, xi = _random_cell_member(rng, rng.randint(1, 4), rng.randint(0, 3))
            mu = default_mu(frame, cell.n)
            plan = transport_perm(frame, mu, cell, xi)
            rep = representative(frame, mu, cell)
            bad = (
                plan.perm.apply_tuple(rep) != xi
                or not plan.perm.fixes_pointwise(frame)
                or not plan.perm.support() <= set(plan.zeta)
            )
            if bad:
                return False, {"frame": list(frame), "cell": cell.key(), "xi": list(xi)}
        return True

    c.run("transporter-properties", check)


def swap_instance_check(frame, cell: Cell, xi, eta0, b: Bounds | None = None):
    """Whether swap_e holds exactly at eta = pi_xi(eta0) among candidates over the atoms in play.

    Returns (ok, detail).  Candidate coordinates are the atoms in play plus
    one fresh atom, which covers every orbit.
    """
    n, m, q = cell.n, len(eta0), len(frame)
    mu = default_mu(frame, n)
    rep = representative(frame, mu, cell)
    target = transport_perm(frame, mu, cell, xi).perm.apply_tuple(eta0)
    F = build_swap(cell.e, n, m, q)
    base = {**dict(zip(vec("x0_", n), rep)), **dict(zip(vec("x", n), xi)), **dict(zip(vec("y0_", m), eta0))}
    inplay = set(rep) | set(xi) | set(eta0) | set(frame)
    pool = sorted(inplay) + list(fresh_atoms(inplay, 1))
    ys = vec("y", m)
    hits = []
    for eta in product(pool, repeat=m):
        r = eval_nominal(F, Assignment({**base, **dict(zip(ys, eta))}), b)
        if r.is_unknown:
            return False, {"eta": list(eta), "verdict": "unknown"}
        if r.is_true:
            hits.append(eta)
    ok = hits == [target] if target in set(product(pool, repeat=m)) else not hits
    return ok, {"target": list(target), "hits": [list(h) for h in hits]}


def _suite_swap(c: _Cases, o: SuiteOptions):
    def check():
        rng = random.Random(o.seed)
        for _ in range(o.samples or 200):
            n, m, q = rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 2)
            frame, cell, xi = _random_cell_member(rng, n, q)
            mu = default_mu(frame, n)
            rep = representative(frame, mu, cell)
            atoms = sorted(set(frame) | set(rep) | set(xi))
            atoms += list(fresh_atoms(atoms, 2))
            eta0 = tuple(rng.choice(atoms) for _ in range(m))
            ok, detail = swap_instance_check(frame, cell, xi, eta0)
            if not ok:
                return False, {"frame": list(frame), "cell": cell.key(), "xi": list(xi), "eta0": list(eta0), **detail}
        return True

    c.run("swap-uniqueness", check)


def _suite_finite_choice(c: _Cases, o: SuiteOptions):
    for key, (text, n, m) in CATALOG.items():
        for N in range(1, min(o.size, 3) + 1):
            c.run(f"{key} N={N}", lambda text=text, n=n, m=m, N=N: check_finite_choice(FiniteStructure(N), parse(text), n, m))


def _suite_prop41(c: _Cases, o: SuiteOptions):
    size = min(o.size, 3)
    for N in range(1, size + 1):
        c.run(f"WO1 N={N}", lambda N=N: eval_finite(FiniteStructure(N), build_WO(1)))
    for N in range(1, size + 1):
        c.run(f"WO1<->WO2 N={N}", lambda N=N: eval_finite(FiniteStructure(N), Iff(build_WO(1), build_WO(2))))
    c.run(f"wo->lo N={size}", lambda: wo_implies_lo_finite(size))
    # the oracle is not vacuous: with T forced empty no nonempty A is well-ordered
    empty_T = forall(("u1", "v1"), Not(pred("T2", "u1", "v1")))
    F = forall(("A1",), exists(("T2",), conj(build_wo(1), empty_T)))
    c.run("forced-empty-T is refuted N=2", lambda: eval_finite(FiniteStructure(2), F) is False)


def _suite_replay(c: _Cases, o: SuiteOptions):
    for key, text, n, m in catalog_cases():

        def check(text=text, n=n, m=m):
            try:
                rep = replay(text, n, m, b=o.bounds, seed=o.seed)
            except (ReplayError, SupportError) as exc:
                return False, str(exc)
            if not rep.passed:
                return False, rep.to_json()
            cx = transported_witness_counterexample(build_choice_table(parse(text), n, m, b=o.bounds), seed=o.seed)
            return (True, {"sigma": rep.sigma.to_json()}) if cx is None else (False, {"xi": list(cx)})

        c.run(f"{key} n={n} m={m}", check)

    def sabotage():
        rep = replay("D1 x1", 1, 1, b=o.bounds, sabotage=True, seed=o.seed)
        return rep.consequent == "false", {"failing_x": list(rep.failing_x or ())}

    c.run("sabotage is caught", sabotage)


def _suite_lo_refuter(c: _Cases, o: SuiteOptions):
    ev = not_WO1_evidence(o.max_q, min(o.size, 3))
    lo = ev["not_LO1"]
    for case in lo["cases"]:
        c.run(f"q={case['q']} pair cell {case['pair_cell']}", lambda case=case: (case["refuted"], {"violated": case["violated"]}))
    c.run(
        f"sweep max_q={o.max_q}",
        lambda: (lo["survivors"] == 0, {"swept": lo["swept"], "survivors": lo["survivors"]}),
    )
    c.run("probe never true", lambda: (all(p["verdict"] != "true" for p in lo["probes"]), {"probes": lo["probes"]}))
    c.run("wo->lo oracle", lambda: ev["wo_implies_lo"])
    c.run("not-WO1 chain", lambda: (ev["passed"], {"chain": ev["chain"]}))


_SUITE_FUNCS = {
    "partitions": _suite_partitions,
    "choice-set": _suite_choice_set,
    "transporter": _suite_transporter,
    "swap": _suite_swap,
    "finite-choice": _suite_finite_choice,
    "prop41": _suite_prop41,
    "replay": _suite_replay,
    "lo-refuter": _suite_lo_refuter,
}


def run_suite(name: str, options: SuiteOptions | None = None) -> dict:
    if name not in _SUITE_FUNCS:
        raise ValueError(f"unknown suite name {name!r}; expected one of {', '.join(SUITES)}")
    o = options or SuiteOptions()
    cases = _Cases(o.timings)
    _SUITE_FUNCS[name](cases, o)
    return {
        "suite": name,
        "cases": cases.items,
        "bounds": o.bounds.to_json(),
        "seed": o.seed,
        "passed": all(x["verdict"] == "pass" for x in cases.items),
    }
