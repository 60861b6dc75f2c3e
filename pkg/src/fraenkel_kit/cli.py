"""fraenkel-kit command line.

Exit status: 0 when every check passes, 1 when some check fails, 2 on usage
errors (bad flags, unparsable formulas or assignments).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .evaluation import Assignment, Bounds, eval_nominal
from .logic.parser import FormulaSyntaxError, to_text
from .logic.syntax import FormulaError, pred_arity
from .nominal import FinSuppPredicate
from .oracle import MAX_SIZE, FiniteStructure, eval_finite
from .partition import classify, default_mu, enumerate_cells, make_frame, representative
from .replay import CATALOG, SUITES, ReplayError, SuiteOptions, catalog_formula, not_WO1_evidence, refute_linear_order, replay, run_suite


class UsageError(Exception):
    pass


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _pos(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _atoms(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(a) for a in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of atoms: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fraenkel-kit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, bounds=True):
        sp.add_argument("--json", action="store_true", help="print a JSON report")
        sp.add_argument("--seed", type=int, default=0)
        if bounds:
            sp.add_argument("--max-extra-fresh", type=_nonneg, default=1)
            sp.add_argument("--max-support", type=_nonneg, default=2)

    def formula_args(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--formula", help="formula text, or a catalog key")
        g.add_argument("--formula-file", type=Path, help="UTF-8 file holding one formula")
        sp.add_argument("--ind", action="append", default=[], metavar="VAR=ATOM", help="assign an individual variable")
        sp.add_argument("--pred", action="append", default=[], metavar="VAR=JSON", help="assign a predicate variable")
        sp.add_argument("--expect", choices=("true", "false", "unknown"), default="true")

    sp = sub.add_parser("eval", help="evaluate a formula in the permutation model")
    formula_args(sp)
    common(sp)

    sp = sub.add_parser("oracle", help="evaluate a formula on a finite full structure")
    formula_args(sp)
    sp.add_argument("--size", type=_pos, default=3)
    sp.add_argument("--naive", action="store_true", help="plain bitmask enumeration")
    common(sp, bounds=False)

    sp = sub.add_parser("suite", help="run a named check suite")
    sp.add_argument("name", choices=SUITES)
    sp.add_argument("--max-q", type=_nonneg, default=3)
    sp.add_argument("--size", type=_pos, default=3)
    sp.add_argument("--samples", type=_pos)
    sp.add_argument("--timings", action="store_true", help="record wall-clock times (breaks byte-identical output)")
    common(sp)

    sp = sub.add_parser("replay", help="replay the choice construction for H(x, D)")
    sp.add_argument("--H", required=True, help="formula text or catalog key (" + ", ".join(CATALOG) + ")")
    sp.add_argument("--n", type=_pos)
    sp.add_argument("--m", type=_pos)
    sp.add_argument("--sabotage", action="store_true", help="replace sigma by the empty predicate")
    sp.add_argument("--timings", action="store_true")
    common(sp)

    sp = sub.add_parser("refute", help="refute linear orders of all atoms")
    sp.add_argument("--tau", help="binary predicate as JSON {arity, frame, cells}; omit for the full case analysis")
    sp.add_argument("--max-q", type=_nonneg, default=3)
    sp.add_argument("--size", type=_pos, default=3)
    common(sp, bounds=False)

    sp = sub.add_parser("cells", help="list the cells of n-tuples over a frame")
    sp.add_argument("--n", type=_pos, required=True)
    sp.add_argument("--frame", type=_atoms, default=(), help="support atoms, e.g. '3,7'")
    sp.add_argument("--classify", type=_atoms, help="report the cell of this tuple")
    common(sp, bounds=False)
    return p


def _read_formula(args):
    text = args.formula if args.formula is not None else args.formula_file.read_text(encoding="utf-8")
    try:
        return catalog_formula(text.strip())
    except FormulaError as exc:
        raise UsageError(str(exc)) from None


def _assignment(args, finite: bool):
    ind = {}
    for item in args.ind:
        name, _, value = item.partition("=")
        try:
            ind[name.strip()] = int(value)
        except ValueError:
            raise UsageError(f"bad individual assignment {item!r}") from None
    pred = {}
    for item in args.pred:
        name, _, value = item.partition("=")
        name = name.strip()
        try:
            data = json.loads(value)
            if finite:
                pred[name] = frozenset(tuple(t) for t in data)
            else:
                pred[name] = FinSuppPredicate.from_json(data)
            pred_arity(name)
        except (ValueError, KeyError, TypeError, FormulaError) as exc:
            raise UsageError(f"bad predicate assignment {item!r}: {exc}") from None
    return ind, pred


def _bounds(args) -> Bounds:
    return Bounds(args.max_extra_fresh, args.max_support)


def cmd_eval(args):
    F = _read_formula(args)
    ind, pred = _assignment(args, finite=False)
    try:
        f = Assignment(ind, pred)
        r = eval_nominal(F, f, _bounds(args))
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    verdict = "unknown" if r.is_unknown else str(r)
    report = {"formula": to_text(F), "verdict": verdict, "bounds": _bounds(args).to_json()}
    return verdict == args.expect, report, str(r)


def cmd_oracle(args):
    if args.size > MAX_SIZE:
        raise UsageError(f"--size must be at most {MAX_SIZE}")
    F = _read_formula(args)
    ind, pred = _assignment(args, finite=True)
    try:
        r = eval_finite(FiniteStructure(args.size), F, ind, pred, naive=args.naive)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    verdict = "true" if r else "false"
    report = {"formula": to_text(F), "size": args.size, "verdict": verdict}
    return verdict == args.expect, report, verdict


def cmd_suite(args):
    o = SuiteOptions(args.seed, _bounds(args), args.max_q, min(args.size, MAX_SIZE), args.samples, args.timings)
    report = run_suite(args.name, o)
    lines = [f"{c['verdict'].upper():4} {c['name']}" for c in report["cases"]]
    lines.append(f"suite {args.name}: {'pass' if report['passed'] else 'FAIL'}")
    return report["passed"], report, "\n".join(lines)


def cmd_replay(args):
    key = args.H.strip()
    if key in CATALOG:
        _, n0, m0 = CATALOG[key]
    else:
        n0 = m0 = 1
    n, m = args.n or n0, args.m or m0
    try:
        H = catalog_formula(key)
    except FormulaError as exc:
        raise UsageError(str(exc)) from None
    try:
        rep = replay(H, n, m, b=_bounds(args), sabotage=args.sabotage, seed=args.seed, timings=args.timings)
    except FormulaError as exc:
        raise UsageError(str(exc)) from None
    except ReplayError as exc:
        report = {"H": to_text(H), "n": n, "m": m, "error": str(exc), "passed": False}
        return False, report, f"replay failed: {exc}"
    data = rep.to_json()
    text = "\n".join(
        [
            f"H = {rep.H}   n={n} m={m}",
            f"P = {list(rep.P)}  mu = {list(rep.mu)}  P0 = {list(rep.P0)}",
            *(f"  {c['cell']}: rep {c['representative']} witness {c['witness']}" for c in rep.cells),
            f"sigma0 = {rep.sigma0}",
            f"sigma  = {rep.sigma}",
            f"consequent: {rep.consequent}" + (f" (fails at x = {list(rep.failing_x)})" if rep.failing_x else ""),
            f"stabilizer: {'ok' if rep.stabilizer else rep.stabilizer_counterexample}",
            f"replay: {'pass' if rep.passed else 'FAIL'}",
        ]
    )
    return rep.passed, data, text


def cmd_refute(args):
    if args.tau is None:
        ev = not_WO1_evidence(args.max_q, min(args.size, MAX_SIZE))
        return ev["passed"], ev, "\n".join(ev["chain"] + [f"result: {'pass' if ev['passed'] else 'FAIL'}"])
    try:
        tau = FinSuppPredicate.from_json(json.loads(args.tau))
        ref = refute_linear_order(tau)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad --tau: {exc}") from None
    report = {"tau": tau.to_json(), "pair": list(ref.pair), "both_directions": ref.present, "violated": ref.violated}
    a, b = ref.pair
    word = "both in" if ref.present else "both outside"
    return True, report, f"({a},{b}) and ({b},{a}) are {word} tau: {ref.violated} fails"


def cmd_cells(args):
    frame = make_frame(args.frame)
    mu = default_mu(frame, args.n)
    cells = enumerate_cells(args.n, len(frame))
    report = {
        "n": args.n,
        "frame": list(frame),
        "mu": list(mu),
        "count": len(cells),
        "cells": [{"cell": c.key(), "representative": list(representative(frame, mu, c))} for c in cells],
    }
    lines = [f"{len(cells)} cells of {args.n}-tuples over frame {list(frame)} (mu = {list(mu)})"]
    lines += [f"  {c['cell']}  {c['representative']}" for c in report["cells"]]
    if args.classify is not None:
        if len(args.classify) != args.n:
            raise UsageError(f"--classify needs {args.n} atoms")
        c = classify(args.classify, frame)
        report["classified"] = {"tuple": list(args.classify), "cell": c.key()}
        lines.append(f"{list(args.classify)} is in {c.key()}")
    return True, report, "\n".join(lines)


COMMANDS = {
    "eval": cmd_eval,
    "oracle": cmd_oracle,
    "suite": cmd_suite,
    "replay": cmd_replay,
    "refute": cmd_refute,
    "cells": cmd_cells,
}


def run_command(argv) -> tuple[int, dict | None, str]:
    """Run one command; returns (exit status, report, text to print)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None, ""
    try:
        ok, report, text = COMMANDS[args.command](args)
    except (UsageError, FormulaSyntaxError, OSError) as exc:
        return 2, {"error": str(exc)}, f"fraenkel-kit: error: {exc}"
    out = json.dumps(report, indent=2, sort_keys=True) if args.json else text
    return (0 if ok else 1), report, out


def main(argv=None) -> int:
    code, _, out = run_command(sys.argv[1:] if argv is None else argv)
    if out:
        print(out, file=sys.stderr if code == 2 else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
