import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sepval.errors import ModelFileError, ModelSyntaxError
from sepval.lattice import vset
from sepval.modelfile import dump_model, load, loads, parse_result, render_result
from sepval.quotient import equals0, as_quotient

MODELS = ["models/potentials.yaml", "models/gaussian.yaml", "models/belief.yaml"]


@pytest.mark.parametrize("path", MODELS)
def test_shipped_models_load_and_roundtrip(path):
    m = load(path)
    again = loads(dump_model(m))
    assert list(again.valuations) == list(m.valuations)
    for k, v in m.valuations.items():
        assert again.valuations[k].equals(v, 1e-9)
    for k, q in m.quotients.items():
        assert equals0(again.quotients[k], q, 1e-9)


@pytest.mark.parametrize("path", MODELS)
def test_rendered_results_reparse(path):
    m = load(path)
    for v in list(m.valuations.values()) + list(m.quotients.values()):
        back = parse_result(m, render_result(v))
        assert equals0(as_quotient(back), as_quotient(v), 1e-9)


def test_partition_belief_model():
    m = loads(
        'instance: belief\nlattice: partitions\nuniverse: [1, 2, 3, 4]\nvaluations:\n'
        '  m: {domain: "[[1,2],[3,4]]", masses: [[[0], 0.4], [[0, 1], 0.6]]}\n'
    )
    v = m.valuations["m"]
    assert v.focal() == {1: 0.4, 3: 0.6}
    assert loads(dump_model(m)).valuations["m"].equals(v)


@pytest.mark.parametrize(
    "text, message, line",
    [
        ("instance: cats\n", "instance must be one of", 1),
        ("instance: potentials\nvariables: {A: 2}\nvaluations:\n  p: {domain: \"{A}\", values: [1]}\n", "expected 2 values", 4),
        ("instance: potentials\nvariables: {A: 2}\nvaluations:\n  p: {domain: \"{B}\", values: [1, 1]}\n", "undeclared variables", 4),
        ("instance: potentials\nvariables: {A: 2}\nvaluations:\n  p: {domain: \"A\", values: [1, 1]}\n", "variable set must look like", 4),
        ("instance: potentials\nvariables: {A: 2}\nvaluations:\n  p: {domain: \"{A}\", values: [1, -1]}\n", "negative value", 4),
        ("instance: potentials\nvariables: {A: 2}\nextra: 1\n", "unknown top-level field", 3),
        ("instance: gaussian\nvariables: [X]\nvaluations:\n  g: {domain: \"{X}\", mean: [0], concentration: [[-1]]}\n",
         "not positive definite", 4),
        ("instance: potentials\nvariables: {A: 2}\nvaluations:\n  p: {domain: \"{A}\", values: [1, 0]}\n"
         "quotients:\n  c: {num: p, den: zz}\n", "unknown valuation 'zz'", 6),
        ("instance: potentials\nlattice: partitions\nuniverse: [1, 2]\n", "only supported for belief", 2),
    ],
)
def test_diagnostics_carry_positions(text, message, line):
    with pytest.raises(ModelFileError) as exc:
        loads(text)
    assert message in str(exc.value)
    assert exc.value.line == line


def test_syntax_errors():
    with pytest.raises(ModelSyntaxError) as exc:
        loads("instance: [potentials\n")
    assert exc.value.line is not None
    with pytest.raises(ModelFileError):
        loads("")


@given(st.lists(st.floats(0, 1e6, allow_nan=False), min_size=4, max_size=4))
def test_potential_rendering_roundtrip(vals):
    m = load("models/potentials.yaml")
    v = m.algebra.make(vset("A", "B"), vals)
    back = parse_result(m, render_result(v))
    assert np.allclose(back.flat, v.flat, rtol=1e-11, atol=1e-12)
