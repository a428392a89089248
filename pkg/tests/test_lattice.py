import pytest
from hypothesis import given
from hypothesis import strategies as st

from sepval.errors import ContextMismatch, DomainSyntaxError, OrderError
from sepval.lattice import (
    VARIABLES,
    PartitionLattice,
    blocks_to_mask,
    check_lattice_laws,
    check_lattice_suite,
    check_partition_bounds,
    coarsening_map,
    mask_to_blocks,
    parse_domain,
    refining_map,
    vset,
)

U4 = PartitionLattice((1, 2, 3, 4))


def F(*blocks):
    return U4.frame(blocks)


def test_subset_join_meet_leq():
    assert vset("A") | vset("B") == vset("A", "B")
    assert vset("A", "B") & vset("B", "C") == vset("B")
    assert vset("A") <= vset("A", "B")
    assert not vset("A", "B") <= vset("B", "C")


def test_partition_join_is_common_refinement():
    assert F([1, 2], [3, 4]) | F([1, 3], [2, 4]) == U4.top()


def test_partition_meet_is_connected_components():
    assert F([1, 2], [3, 4]) & F([1, 3], [2, 4]) == U4.bottom()
    assert F([1, 2], [3], [4]) & F([1], [2], [3, 4]) == F([1, 2], [3, 4])


def test_partition_order_coarser_below_finer():
    assert U4.bottom() <= F([1, 2], [3, 4])
    assert F([1, 2], [3, 4]) <= U4.top()
    assert not F([1, 2], [3, 4]) <= F([1, 3], [2, 4])


def test_refining_and_coarsening_maps():
    theta = F([1, 2], [3, 4])
    lam = U4.top()
    s = blocks_to_mask(theta, [[1, 2]])
    assert mask_to_blocks(lam, refining_map(s, theta, lam)) == [frozenset({1}), frozenset({2})]
    assert refining_map(0, theta, lam) == 0
    assert refining_map(0b11, theta, lam) == 0b1111
    t = blocks_to_mask(lam, [[1]])
    assert mask_to_blocks(theta, coarsening_map(t, theta, lam)) == [frozenset({1, 2})]
    assert coarsening_map(0, theta, lam) == 0
    assert coarsening_map(0b1111, theta, lam) == 0b11
    with pytest.raises(OrderError):
        refining_map(1, lam, theta)


def test_partition_lattice_has_fifteen_elements_and_is_not_distributive():
    assert len(U4.elements()) == 15
    rep = check_lattice_laws(U4, U4.elements())
    assert not rep["lattice.distributive"].passed
    assert not rep["lattice.modular"].passed
    assert rep["lattice.associativity"].passed and rep["lattice.absorption"].passed
    assert not U4.is_distributive and not U4.is_modular


def test_partition_bounds_exhaustive_up_to_five_atoms():
    for n in (2, 3, 4, 5):
        assert check_partition_bounds(PartitionLattice(tuple(range(n)))).ok


def test_subset_laws_and_empty_sample():
    assert check_lattice_laws(VARIABLES, VARIABLES.elements("ABC")).ok
    assert check_lattice_laws(VARIABLES, []).ok


def test_lattice_suite():
    assert check_lattice_suite(n=200).ok


def test_parse_domains():
    assert parse_domain("{A, B}", VARIABLES) == vset("A", "B")
    assert parse_domain("{}", VARIABLES) == VARIABLES.bottom()
    assert parse_domain("[[1,2],[3,4]]", U4) == F([3, 4], [1, 2])
    assert str(F([3, 4], [1, 2])) == "[[1,2],[3,4]]"
    for bad in ("A,B", "{A,A}"):
        with pytest.raises(DomainSyntaxError):
            parse_domain(bad, VARIABLES)
    for bad in ("[[1,2]]", "[1,2,3,4]", "[[1,2],[2,3,4]]"):
        with pytest.raises(DomainSyntaxError):
            parse_domain(bad, U4)


def test_context_mismatch():
    with pytest.raises(ContextMismatch):
        U4.join(U4.top(), PartitionLattice((1, 2, 3)).top())


subsets = st.frozensets(st.sampled_from("ABCDEF")).map(lambda s: vset(*s))
partitions = st.sampled_from(U4.elements())


@given(subsets, subsets, subsets)
def test_subset_lattice_is_distributive(x, y, z):
    assert x & (y | z) == (x & y) | (x & z)
    assert (x <= y) == ((x | y) == y) == ((x & y) == x)


@given(partitions, partitions, partitions)
def test_partition_lattice_laws(x, y, z):
    assert x | y == y | x and x & y == y & x
    assert (x | y) | z == x | (y | z)
    assert (x & y) & z == x & (y & z)
    assert x & (x | y) == x and x | (x & y) == x
    assert (x <= y) == ((x | y) == y) == ((x & y) == x)
