import json
import subprocess
import sys
from pathlib import Path

import pytest

from fraenkel_kit.cli import main, run_command

FORMULAS = Path(__file__).resolve().parents[1] / "formulas"


def test_eval_expectations():
    assert run_command(["eval", "--formula", "~(x1 = x2)", "--ind", "x1=5", "--ind", "x2=5", "--expect", "false"])[0] == 0
    code, report, _ = run_command(["eval", "--formula", "~(x1 = x2)", "--ind", "x1=5", "--ind", "x2=5"])
    assert code == 1 and report["verdict"] == "false"


def test_eval_predicate_json():
    co3 = json.dumps({"arity": 1, "frame": [3], "cells": ["e=[2];K=[[1]]"]})
    code, report, _ = run_command(["eval", "--formula", "all x1 B1 x1", "--pred", f"B1={co3}", "--json"])
    assert code == 1 and report["verdict"] == "false"


def test_eval_unknown_carries_bounds():
    full = json.dumps({"arity": 1, "frame": [], "cells": ["e=[1];K=[[1]]"]})
    argv = ["eval", "--formula-file", str(FORMULAS / "lo_full.sol"), "--pred", f"A1={full}"]
    code, report, text = run_command(argv + ["--expect", "unknown", "--max-support", "1"])
    assert code == 0 and text == "unknown(max_extra_fresh=1, max_support=1)"


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["eval", "--formula", "x1 = "],
        ["eval", "--formula", "x1 = x2"],
        ["eval", "--formula", "A1 x1", "--ind", "x1=0", "--pred", "A1=[1,2"],
        ["oracle", "--formula", "x1 = x1", "--ind", "x1=7", "--size", "2"],
        ["oracle", "--formula", "x1 = x1", "--size", "9"],
        ["cells", "--n", "2", "--classify", "1"],
        ["suite", "partitions", "--max-q", "-1"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_oracle_file():
    code, _, text = run_command(["oracle", "--formula-file", str(FORMULAS / "wo_implies_lo.sol"), "--size", "2"])
    assert (code, text) == (0, "true")
    code, _, _ = run_command(["oracle", "--formula", "A1 x1", "--ind", "x1=0", "--pred", "A1=[[1]]", "--size", "2"])
    assert code == 1


def test_replay_and_sabotage():
    code, report, _ = run_command(["replay", "--H", "member", "--json"])
    assert code == 0 and report["consequent"] == "true"
    code, report, text = run_command(["replay", "--H", "D1 x1", "--sabotage"])
    assert code == 1 and "fails at x = [0]" in text
    code, report, _ = run_command(["replay", "--H", "D1 x1 & ~D1 x1"])
    assert code == 1 and report["error"] == "no witness within bounds"


def test_refute_and_cells():
    code, report, text = run_command(["refute", "--tau", '{"arity": 2, "frame": [3], "cells": []}'])
    assert code == 0 and report["pair"] == [0, 1] and "totality" in text
    code, report, _ = run_command(["cells", "--n", "2", "--frame", "3", "--classify", "3,9"])
    assert report["count"] == 5 and report["classified"]["cell"] == "e=[1,2];K=[[2]]"


def test_json_is_byte_identical():
    argv = ["suite", "swap", "--samples", "15", "--json", "--seed", "3"]
    assert run_command(argv)[2] == run_command(argv)[2]


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "fraenkel_kit.cli", "cells", "--n", "3", "--json"], capture_output=True, text=True
    )
    assert out.returncode == 0 and json.loads(out.stdout)["count"] == 5
