"""Regenerate tests/golden/ from the shipped models.

Each case is a CLI argument list; the golden file stores the exit code on
the first line followed by stdout.  Run from the repository root.
"""

import contextlib
import io
import sys
from pathlib import Path

from sepval.cli import main

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"

CASES = {
    "validate_potentials": ["validate", "models/potentials.yaml"],
    "validate_gaussian": ["validate", "models/gaussian.yaml"],
    "validate_belief": ["validate", "models/belief.yaml"],
    "eval_potentials_compose": ["eval", "models/potentials.yaml", "p > q @ {A,B}"],
    "eval_potentials_condition": ["eval", "models/potentials.yaml", "q | {A}"],
    "eval_potentials_unit": ["eval", "models/potentials.yaml", "p * unit({A})"],
    "eval_gaussian_compose": ["eval", "models/gaussian.yaml", "(f > g) @ {X,Z}"],
    "eval_gaussian_quotient": ["eval", "models/gaussian.yaml", "g_over_h", "--format", "compact"],
    "eval_belief_compose": ["eval", "models/belief.yaml", "m1 > m2"],
    "eval_belief_condition": ["eval", "models/belief.yaml", "m2 | {A}"],
    "condition_potentials": ["condition", "models/potentials.yaml", "--of", "{A,B}", "--given", "{A}"],
    "compose_gaussian": ["compose", "models/gaussian.yaml", "--order", "f,g,h", "--project", "{X,Z}"],
    "laws_potentials_axioms": ["laws", "models/potentials.yaml", "axioms", "--seed", "7", "--n", "200"],
    "laws_gaussian_axioms": ["laws", "models/gaussian.yaml", "axioms", "--seed", "7", "--n", "200"],
    "laws_belief_axioms": ["laws", "models/belief.yaml", "axioms", "--seed", "7", "--n", "200"],
    "laws_gaussian_a5prime": ["laws", "gaussian", "a5prime", "--n", "200"],
    "laws_belief_witness": ["laws", "belief", "regularity-witness"],
    "laws_potentials_conditionals_compact": ["laws", "potentials", "conditionals", "--n", "100", "--format", "compact"],
}


def run(args):
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = main(args)
    return f"exit {code}\n" + out.getvalue()


if __name__ == "__main__":
    import os

    os.chdir(ROOT)
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, args in CASES.items():
        (GOLDEN / f"{name}.txt").write_text(run(args), encoding="utf-8")
        print(f"wrote {name}.txt", file=sys.stderr)
