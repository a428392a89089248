"""Compare Gaussian combination and projection with grid integration of the density.

The density exp(-(x-mu)^T K (x-mu)/2) is evaluated on [-8, 8] with step
0.01; means and (co)variances of the grid weights are compared with the
closed-form results.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from test_acceptance import _oracle_c  # noqa: E402

if __name__ == "__main__":
    ok, detail = _oracle_c()
    print(("PASS " if ok else "FAIL ") + detail)
    sys.exit(0 if ok else 1)
