import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import as_point_sets, combine_brute, commonality_brute, moebius_brute
from sepval.belief import (
    BeliefAlgebra,
    FrameSystem,
    MassFunction,
    belief_to_mass,
    combine_commonality,
    commonality_to_mass,
    mass_to_belief,
    mass_to_commonality,
    quotient_reduce_belief,
    regularity_witness,
)
from sepval.core import check_axioms
from sepval.errors import NotReducible
from sepval.lattice import PartitionLattice, vset

AB = FrameSystem(PartitionLattice(("a", "b")))
THETA = AB.lattice.top()
PART = BeliefAlgebra.partitions((1, 2, 3, 4))
MULTI = BeliefAlgebra.multivariate({"A": 2, "B": 2})

m1 = MassFunction.from_focal(AB, THETA, {0b01: 0.5, 0b11: 0.5})
m2 = MassFunction.from_focal(AB, THETA, {0b10: 0.4, 0b11: 0.6})


def test_commonality_and_belief_examples():
    assert np.allclose(m1.commonality(), [1, 1, 0.5, 0.5])
    assert np.allclose(m1.belief()[[0b01, 0b11]], [0.5, 1.0])
    vac = MassFunction.from_focal(AB, THETA, {0b11: 1.0})
    assert np.allclose(vac.commonality(), 1)
    assert np.allclose(vac.belief(), [0, 0, 0, 1])


def test_same_frame_combination():
    r = m1 * m2
    assert np.allclose(r.masses, [0.2, 0.3, 0.2, 0.3])
    assert np.allclose(combine_commonality(m1, m2), [1.0, 0.6, 0.5, 0.3])
    unit = MassFunction.from_focal(AB, THETA, {0b11: 1.0})
    assert (m1 * unit).equals(m1)


def test_cross_frame_combination_matches_brute_force():
    coarse = PART.lattice.frame([[1, 2], [3, 4]])
    fine = PART.lattice.top()
    a = PART.make(coarse, {0b01: 0.7, 0b11: 0.3})
    b = PART.make(fine, {0b0011: 0.5, 0b0100: 0.25, 0b1111: 0.25})
    assert _same(a * b, combine_brute(a, b))


def _same(m, brute):
    got = as_point_sets(m)
    keys = set(got) | set(brute)
    return all(abs(got.get(k, 0) - brute.get(k, 0)) < 1e-12 for k in keys)


def test_projection_coarsens():
    fine = PART.lattice.top()
    coarse = PART.lattice.frame([[1, 2], [3, 4]])
    m = PART.make(fine, {0b0001: 1.0})
    assert m.project(coarse).focal() == {0b01: 1.0}
    r = PART.random_valuation(np.random.default_rng(0), fine)
    assert np.isclose(r.project(coarse).masses.sum(), r.masses.sum())
    assert r.project(fine).equals(r)


def test_reduce_quotients():
    q = m1.commonality()
    unit = quotient_reduce_belief(q, q, THETA, AB)
    assert unit.focal() == {0b11: pytest.approx(1.0)}
    m, signed = regularity_witness()
    assert signed[0b01] == pytest.approx(-1.0)
    with pytest.raises(NotReducible):
        inv = np.where(q > 0, 1 / np.where(q > 0, q, 1), 0)
        quotient_reduce_belief(inv, np.ones_like(q), THETA, AB)


def test_bayesian_conditional_matches_potential_conditional():
    x = vset("A", "B")
    joint = MULTI.make(x, {0b0001: 0.1, 0b0010: 0.3, 0b0100: 0.2, 0b1000: 0.4})
    num = joint.commonality()
    den = joint.project(vset()).lifted_commonality(x)
    r = quotient_reduce_belief(num, den, x, MULTI.system)
    assert np.allclose([r.focal()[1 << i] for i in range(4)], [0.1, 0.3, 0.2, 0.4])


def test_group_tag_and_domination():
    vac = MassFunction.from_focal(AB, THETA, {0b11: 1.0})
    sharp = MassFunction.from_focal(AB, THETA, {0b01: 1.0})
    assert sharp.dominates(vac) and sharp.dominates(m1)
    assert not vac.dominates(sharp)
    assert m1.group_tag() == (m1 * m1).group_tag() == vac.group_tag()
    assert sharp.group_tag() != m1.group_tag()


def test_axioms_multivariate_and_partition_failure():
    rep = check_axioms(MULTI, n=200, seed=1)
    assert rep.ok, rep.to_text()
    part = check_axioms(PART, n=300, seed=0)
    assert not part["A5.combination"].passed


def test_known_partition_counterexample_for_combination_axiom():
    L = PART.lattice
    x, y = L.frame([[1, 3], [2], [4]]), L.frame([[1, 4], [2, 3]])
    phi = PART.make(x, {0b010: 1.0})
    psi = PART.make(y, {0b01: 1.0})
    lhs = (phi * psi).project(x)
    rhs = phi * psi.project(x & y)
    assert lhs.focal() == {0: pytest.approx(1.0)}
    assert rhs.focal() == {0b010: pytest.approx(1.0)}


masses = st.lists(st.floats(0, 1), min_size=8, max_size=8).filter(lambda v: sum(v) > 0)


@given(masses)
def test_transforms_match_brute_force_and_roundtrip(v):
    m = np.array(v)
    q = mass_to_commonality(m)
    assert np.allclose(q, commonality_brute(m), atol=1e-12)
    assert np.allclose(moebius_brute(q), m, atol=1e-12)
    assert np.allclose(commonality_to_mass(q), m, atol=1e-12)
    assert np.allclose(belief_to_mass(mass_to_belief(m)), m, atol=1e-12)


@given(st.integers(0, 10_000))
def test_commonality_route_equals_mass_route(seed):
    rng = np.random.default_rng(seed)
    x, y = PART.random_domain(rng), PART.random_domain(rng)
    a, b = PART.random_valuation(rng, x), PART.random_valuation(rng, y)
    assert np.allclose((a * b).commonality(), combine_commonality(a, b), atol=1e-12)
    assert _same(a * b, combine_brute(a, b))


MULTI3 = BeliefAlgebra.multivariate({"A": 2, "B": 2, "C": 2})


@given(st.integers(0, 10_000))
def test_multivariate_combination_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    x, y = MULTI3.random_domain(rng), MULTI3.random_domain(rng)
    a, b = MULTI3.random_valuation(rng, x), MULTI3.random_valuation(rng, y)
    assert _same(a * b, combine_brute(a, b))
