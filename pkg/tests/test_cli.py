import contextlib
import io
import os
import subprocess
import sys
from pathlib import Path

import pytest

from sepval.cli import main

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "scripts"))
from make_golden import CASES, run  # noqa: E402


@pytest.fixture(autouse=True)
def at_root(monkeypatch):
    monkeypatch.chdir(ROOT)


def cli(*args):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(args))
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    expected = (ROOT / "tests" / "golden" / f"{name}.txt").read_text(encoding="utf-8")
    assert run(CASES[name]) == expected


def test_reports_are_deterministic():
    a = cli("laws", "belief", "separative", "--seed", "3", "--n", "40")
    b = cli("laws", "belief", "separative", "--seed", "3", "--n", "40")
    assert a == b and a[0] == 0


def test_seed_changes_cases_not_verdict():
    a = cli("laws", "potentials", "axioms", "--seed", "1", "--n", "50")
    b = cli("laws", "potentials", "axioms", "--seed", "2", "--n", "50")
    assert a[0] == b[0] == 0


def test_console_script_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "sepval.cli", "eval", "models/potentials.yaml", "p > q @ {A,B}", "--format", "compact"],
        capture_output=True, text=True, env={**os.environ, "NO_COLOR": "1"},
    )
    assert r.returncode == 0
    assert r.stdout == 'potential {domain: "{A,B}", values: [0.05, 0.15, 0.266666666667, 0.533333333333]}\n'


def write(tmp_path, text):
    path = tmp_path / "m.yaml"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_validate_negative_mass(tmp_path):
    path = write(tmp_path, 'instance: belief\nvariables: {A: 2}\nvaluations:\n  m:\n    domain: "{A}"\n'
                           "    masses: [[[0], -0.2], [[0, 1], 1.2]]\n")
    code, _, err = cli("validate", path)
    assert code == 1
    assert err.strip() == f"{path}:6:20: error: valuation 'm': negative mass -0.2"


def test_validate_non_symmetric_concentration(tmp_path):
    path = write(tmp_path, 'instance: gaussian\nvariables: [X, Y]\nvaluations:\n  g:\n    domain: "{X,Y}"\n'
                           "    mean: [0, 0]\n    concentration: [[1, 0.5], [0.2, 1]]\n")
    code, _, err = cli("validate", path)
    assert code == 1
    assert "concentration matrix is not symmetric" in err and ":7:20:" in err


def test_validate_syntax_error_is_usage_error(tmp_path):
    path = write(tmp_path, "instance: potentials\nvariables: {A: 2\n")
    code, _, err = cli("validate", path)
    assert code == 2 and "YAML syntax error" in err


def test_operation_errors_name_the_step(tmp_path):
    code, _, err = cli("eval", "models/potentials.yaml", "(p * q) @ {C}")
    assert code == 1 and "step (p * q) @ {C}" in err.replace("((p * q) @ {C})", "(p * q) @ {C}")
    path = write(tmp_path, 'instance: potentials\nvariables: {A: 2, B: 2}\nvaluations:\n'
                           '  p: {domain: "{A}", values: [0.5, 0.5]}\n  q: {domain: "{A,B}", values: [0, 0, 1, 1]}\n')
    code, _, err = cli("compose", path, "--order", "p,q")
    assert code == 1 and "composition step 1 (q): CompositionUndefined" in err


def test_usage_errors():
    assert cli("laws", "potentials", "no-such-suite")[0] == 2
    assert cli("laws", "no-such-target", "axioms")[0] == 2
    assert cli("eval", "models/potentials.yaml", "p >")[0] == 2
    assert cli("eval", "models/potentials.yaml", "nope")[0] == 2
    assert cli("laws", "potentials", "regularity-witness")[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli("frobnicate")
    assert exc.value.code == 2


def test_failing_suite_exits_one():
    code, out, _ = cli("laws", "belief-partitions", "axioms", "--n", "300")
    assert code == 1
    assert "LAW A5.combination FAIL" in out and "RESULT FAIL" in out


def test_counterexamples_written(tmp_path):
    code, out, _ = cli("laws", "belief-partitions", "axioms", "--n", "300", "--counterexamples", str(tmp_path))
    assert code == 1
    assert (tmp_path / "A5.combination.txt").exists()
    assert f"counterexample={tmp_path / 'A5.combination.txt'}" in out
