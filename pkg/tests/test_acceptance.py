"""The acceptance criteria, each at its stated tolerance and time limit.

Every test prints one ``PASS``/``FAIL`` line, visible under ``pytest -v -s``
and also in the normal ``-v`` output.
"""

import random
import time
from contextlib import contextmanager

from oracles import bell_by_stirling, direct_eval, in_cell, random_fo_formula

from fraenkel_kit.atoms import FinPerm
from fraenkel_kit.evaluation import Assignment, eval_nominal
from fraenkel_kit.logic import Iff, beta_name, build_cell_formula, build_WO, parse
from fraenkel_kit.nominal import FinSuppPredicate, adequate_unary, choice_set_predicate, stabilizer_superset_check
from fraenkel_kit.oracle import FiniteStructure, check_finite_choice, eval_finite
from fraenkel_kit.partition import classify, default_mu, enumerate_cells, enumerate_partitions, representative
from fraenkel_kit.replay import CATALOG, catalog_cases, not_WO1_evidence, replay, swap_instance_check, wo_implies_lo_finite
from fraenkel_kit.transporter import transport_perm


@contextmanager
def criterion(capsys, k: int, what: str, limit: float):
    start = time.perf_counter()
    failures: list = []
    try:
        yield failures
    except Exception as exc:
        failures.append(repr(exc))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < limit
    with capsys.disabled():
        tail = f"{elapsed:.2f}s (limit {limit:g}s)"
        detail = f"; first failure: {failures[0]}" if failures else ""
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {k}: {what}, {tail}{detail}")
    assert not failures, failures[:3]
    assert elapsed < limit, f"took {elapsed:.2f}s"


def test_criterion_1_partition_counts(capsys):
    with criterion(capsys, 1, "Bell counts and cell counts", 1) as bad:
        got = [len(enumerate_partitions(range(1, k + 1))) for k in range(6)]
        if got != [1, 1, 2, 5, 15, 52] or got != [bell_by_stirling(k) for k in range(6)]:
            bad.append(got)
        if len(enumerate_cells(2, 1)) != 5 or len(enumerate_cells(3, 0)) != 5:
            bad.append("cell counts")


def test_criterion_2_exactly_one_cell(capsys):
    with criterion(capsys, 2, "each tuple satisfies exactly one cell formula", 5) as bad:
        rng = random.Random(2)
        for _ in range(1000):
            n, q = rng.randint(1, 4), rng.randint(0, 3)
            frame = tuple(sorted(rng.sample(range(20), q)))
            t = tuple(rng.randrange(20) for _ in range(n))
            own = classify(t, frame)
            beta = {beta_name(j + 1): b for j, b in enumerate(adequate_unary(frame))}
            xs = {f"x{i + 1}": a for i, a in enumerate(t)}
            f = Assignment(xs, beta)
            if not in_cell(t, frame, own.e, own.K.to_lists()):
                bad.append((t, frame, own.key()))
            for cell in enumerate_cells(n, q):
                r = eval_nominal(build_cell_formula(cell), f)
                if r.value is not (cell == own):
                    bad.append((t, frame, cell.key(), str(r)))


def test_criterion_3_choice_set(capsys):
    with criterion(capsys, 3, "choice sets hold one tuple per cell and are supported", 5) as bad:
        for n in range(1, 4):
            for q in range(4):
                frame = tuple(range(2, 2 + 3 * q, 3))
                mu = default_mu(frame, n)
                d = choice_set_predicate(frame, mu, n)
                ext = d.extension()
                cells = enumerate_cells(n, q)
                if len(ext) != len(cells) or {classify(t, frame) for t in ext} != set(cells):
                    bad.append((n, q, "not one per cell"))
                if not stabilizer_superset_check(d, frame + mu, trials=100):
                    bad.append((n, q, "stabilizer"))


def test_criterion_4_transporter(capsys):
    with criterion(capsys, 4, "transporter maps representatives and fixes the frame", 5) as bad:
        rng = random.Random(4)
        for _ in range(500):
            n, q = rng.randint(1, 4), rng.randint(0, 3)
            frame = tuple(sorted(rng.sample(range(15), q)))
            xi = tuple(rng.choice(list(frame) + list(range(15, 15 + n)) + list(range(15))) for _ in range(n))
            cell = classify(xi, frame)
            mu = default_mu(frame, n)
            plan = transport_perm(frame, mu, cell, xi)
            p = plan.perm
            if p.apply_tuple(representative(frame, mu, cell)) != xi:
                bad.append(("image", frame, xi))
            if any(p(a) != a for a in frame):
                bad.append(("frame moved", frame, xi))
            if not set(p.moved) <= set(plan.zeta):
                bad.append(("moves outside zeta", frame, xi))


def test_criterion_5_swap(capsys):
    with criterion(capsys, 5, "swap_e holds exactly at the transported tuple", 30) as bad:
        rng = random.Random(5)
        for _ in range(200):
            n, m, q = rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 2)
            frame = tuple(sorted(rng.sample(range(10), q)))
            xi = tuple(rng.choice(list(frame) + list(range(10, 10 + n)) + list(range(10))) for _ in range(n))
            cell = classify(xi, frame)
            rep = representative(frame, default_mu(frame, n), cell)
            pool = sorted(set(frame) | set(rep) | set(xi) | {20, 21})
            eta0 = tuple(rng.choice(pool) for _ in range(m))
            ok, detail = swap_instance_check(frame, cell, xi, eta0)
            if not ok:
                bad.append((frame, cell.key(), xi, eta0, detail))


def test_criterion_6_finite_oracle(capsys):
    with criterion(capsys, 6, "finite oracle: WO1, WO1<->WO2, wo->lo, finite choice", 60) as bad:
        for N in (1, 2, 3):
            S = FiniteStructure(N)
            if eval_finite(S, build_WO(1)) is not True:
                bad.append(("WO1", N))
            if eval_finite(S, Iff(build_WO(1), build_WO(2))) is not True:
                bad.append(("WO1<->WO2", N))
            for key, (text, n, m) in CATALOG.items():
                if not check_finite_choice(S, parse(text), n, m):
                    bad.append(("choice", key, N))
        if not wo_implies_lo_finite(3):
            bad.append("wo->lo")


def test_criterion_7_replay(capsys):
    with criterion(capsys, 7, "replay of every catalog H, sabotage caught", 60) as bad:
        for key, text, n, m in catalog_cases():
            if (n, m) not in {(1, 1), (2, 1)}:
                continue
            rep = replay(text, n, m)
            if not (rep.consequent == "true" and rep.stabilizer and rep.passed):
                bad.append((key, n, m, rep.consequent, rep.stabilizer_counterexample))
        sab = replay("D1 x1", 1, 1, sabotage=True)
        if sab.consequent != "false" or sab.passed:
            bad.append("sabotage not caught")


def test_criterion_8_lo_refutation(capsys):
    with criterion(capsys, 8, "no binary predicate linearly orders the atoms", 60) as bad:
        ev = not_WO1_evidence(3, 3)
        lo = ev["not_LO1"]
        if lo["survivors"] != 0 or lo["swept"] == 0:
            bad.append(("survivors", lo["survivors"], lo["first_survivor"]))
        if len(lo["cases"]) != 8 or not all(c["refuted"] for c in lo["cases"]):
            bad.append("case analysis")
        if any(p["verdict"] == "true" for p in lo["probes"]):
            bad.append(("probe", lo["probes"]))
        if not ev["passed"] or not any("WO1 fails" in line for line in ev["chain"]):
            bad.append(ev["chain"])


def _random_pred(rng, arity):
    frame = tuple(sorted(rng.sample(range(8), rng.randint(0, 2))))
    cells = frozenset(c for c in enumerate_cells(arity, len(frame)) if rng.random() < 0.5)
    return FinSuppPredicate(arity, frame, cells)


def test_criterion_9_evaluator_soundness(capsys):
    with criterion(capsys, 9, "first-order exactness and equivariance", 30) as bad:
        rng = random.Random(9)
        for i in range(100):
            pred = {"P1": _random_pred(rng, 1), "R2": _random_pred(rng, 2)}
            F = random_fo_formula(rng, 4)
            assert not F.free_individuals
            atoms = set(pred["P1"].frame) | set(pred["R2"].frame)
            f = Assignment({}, pred)
            r = eval_nominal(F, f)
            if r.value is not direct_eval(F, {}, pred, atoms, extra_fresh=3):
                bad.append(("stress", i, str(r)))
            universe = list(range(12))
            p = FinPerm(dict(zip(universe, rng.sample(universe, len(universe)))))
            if eval_nominal(F, f.permuted(p)).value is not r.value:
                bad.append(("equivariance", i))

