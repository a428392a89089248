import numpy as np
import pytest

from sepval.expr import ExpressionError, parse, result_value, run, show
from sepval.modelfile import load

POT = load("models/potentials.yaml")


def test_grammar_is_left_associative():
    assert show(parse("p > q @ {A,B}")) == "((p > q) @ {A,B})"
    assert show(parse("a * b > c | {A}")) == "(((a * b) > c) | {A})"
    assert show(parse("a * (b > c)")) == "(a * (b > c))"
    assert show(parse("unit({A}) * null([[1,2],[3,4]])")) == "(unit({A}) * null([[1,2],[3,4]]))"


@pytest.mark.parametrize("bad", ["", "p >", "(p", "p q", "p @ q", "p # q", "unit(A)"])
def test_malformed(bad):
    with pytest.raises(ExpressionError):
        parse(bad)


def test_evaluation():
    assert np.allclose(result_value(run("p > q @ {A,B}", POT)).flat, [0.05, 0.15, 0.8 / 3, 1.6 / 3])
    assert np.allclose(result_value(run("q | {A}", POT)).flat, [0.25, 0.75, 1 / 3, 2 / 3])
    assert result_value(run("p * unit({A})", POT)).equals(POT.valuations["p"])
    assert result_value(run("p * null({A})", POT)).is_null()
    assert np.allclose(result_value(run("(p * q) @ {}", POT)).flat, [5.6])


def test_step_errors():
    with pytest.raises(ExpressionError, match="unknown name"):
        run("p * r", POT)
    with pytest.raises(ExpressionError, match="step"):
        run("p @ {B}", POT)
