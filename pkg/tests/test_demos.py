import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from orthoentropy.cli import build_report
from orthoentropy.io import load_problem
from orthoentropy.masa_compare import masa_orthogonal
from orthoentropy.partition_entropy import entropy_of_unitary

DEMOS = Path(__file__).resolve().parent.parent / "demos"
PROBLEMS = DEMOS / "problems"


@pytest.mark.parametrize("script", sorted(p.name for p in DEMOS.glob("*.py") if p.name != "make_problems.py"))
def test_demo_runs(script):
    res = subprocess.run([sys.executable, str(DEMOS / script)], capture_output=True, text=True, timeout=120)
    assert res.returncode == 0, res.stderr


@pytest.mark.parametrize(
    "name, orthogonal",
    [("swap_n2.json", True), ("identity_n2.json", False), ("haar_seed42_n2.json", False)],
)
def test_shipped_problems(name, orthogonal):
    rep = build_report(load_problem(PROBLEMS / name), 1e-8, timing=False)
    assert rep.consistent and rep.orthogonal == orthogonal


def test_shipped_haar_entropy():
    p = load_problem(PROBLEMS / "haar_seed42_n2.json")
    assert entropy_of_unitary(p.ctx, p.u) == pytest.approx(0.8837147899893028, abs=1e-12)


def test_shipped_masa_files():
    assert masa_orthogonal(load_problem(PROBLEMS / "fourier_n3.json").u).verdict
    rep = masa_orthogonal(load_problem(PROBLEMS / "haar_seed5_n3.json").u)
    assert not rep.verdict
    assert rep.extra["entropy"] == pytest.approx(0.9954971413315118, abs=1e-12)
    assert rep.extra["entropy"] < np.log(3)
