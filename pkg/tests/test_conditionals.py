import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sepval.belief import BeliefAlgebra
from sepval.conditionals import check_conditional_laws, conditional, continue_with
from sepval.errors import NullValuationError, OrderError
from sepval.gaussian import GaussianAlgebra
from sepval.lattice import vset
from sepval.potentials import PotentialAlgebra
from sepval.quotient import embed, equals0, idempotent_of, label0, reduce

POT = PotentialAlgebra({"A": 2, "B": 2, "C": 2})
A, AB = vset("A"), vset("A", "B")
q = POT.make(AB, [1, 3, 2, 4])


def test_conditional_table():
    c = conditional(q, AB, A)
    assert label0(c.body) == AB
    assert np.allclose(c.reduce().flat, [0.25, 0.75, 1 / 3, 2 / 3])


def test_conditional_on_own_domain_is_idempotent():
    c = conditional(q, AB, AB)
    assert equals0(c.body, idempotent_of(embed(q)))


def test_continuation_rebuilds_marginal():
    c = conditional(q, AB, A)
    assert reduce(continue_with(c, q.project(A))).equals(q)
    assert reduce(continue_with(c, POT.unit(A))).equals(c.reduce())
    with pytest.raises(OrderError):
        continue_with(c, q)


def test_gaussian_continuation():
    G = GaussianAlgebra((1, 2))
    g = G.make(vset(1, 2), [0.5, -1], [[2, 0.3], [0.3, 1]])
    c = conditional(g, vset(1, 2), vset(1))
    assert reduce(continue_with(c, g.project(vset(1)))).equals(g)


def test_preconditions():
    with pytest.raises(OrderError):
        conditional(q, A, AB)
    z = POT.make(AB, [0, 0, 1, 1])
    with pytest.raises(NullValuationError):
        conditional(POT.make(AB, [0, 0, 0, 0]), AB, A)
    assert conditional(z, AB, A).reduce() is not None


@pytest.mark.parametrize(
    "algebra",
    [POT, GaussianAlgebra((1, 2, 3)), BeliefAlgebra.multivariate({"A": 2, "B": 2, "C": 2})],
    ids=["potentials", "gaussian", "belief"],
)
def test_conditional_identities_small(algebra):
    rep = check_conditional_laws(algebra, n=60, seed=2)
    assert rep.ok, rep.to_text()


@given(st.lists(st.floats(0.05, 5), min_size=8, max_size=8))
def test_chain_rule_positive_tables(vals):
    phi = POT.make(vset("A", "B", "C"), vals)
    mg = {}
    xz = conditional(phi, phi.domain, A, mg)
    xy = conditional(phi, phi.domain, AB, mg)
    yz = conditional(phi, AB, A, mg)
    assert equals0(xz.body, xy * yz)
