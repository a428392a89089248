import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sepval.core import check_axioms, close
from sepval.errors import DominationError, NullValuationError, OrderError
from sepval.lattice import vset
from sepval.potentials import Potential, PotentialAlgebra, support

ALG = PotentialAlgebra({"A": 2, "B": 2, "C": 2})
A, AB = vset("A"), vset("A", "B")
p = ALG.make(A, [0.2, 0.8])
q = ALG.make(AB, [1, 3, 2, 4])


def test_running_example_combine_and_project():
    assert np.allclose((p * q).flat, [0.2, 0.6, 1.6, 3.2])
    assert (p * q).domain == AB
    assert np.allclose(q.project(A).flat, [4, 6])
    assert q.project(AB).equals(q)
    assert ALG.null(AB).project(A).is_null()


def test_units_and_nulls():
    assert np.array_equal(ALG.unit(A).flat, [1, 1])
    assert (p * ALG.unit(A)).equals(p)
    assert (p * ALG.null(A)).equals(ALG.null(A))
    assert np.array_equal(ALG.null(A).flat, [0, 0])


def test_invert_on_support():
    assert np.allclose(ALG.make(A, [4, 6]).invert().flat, [0.25, 1 / 6])
    assert np.allclose(ALG.make(A, [2, 0]).invert().flat, [0.5, 0])
    assert (p * p.invert() * p).equals(p)
    with pytest.raises(NullValuationError):
        ALG.null(A).invert()


def test_support_and_domination():
    z = ALG.make(A, [0.2, 0])
    assert support(z) == frozenset({(0,)})
    assert support(p) == frozenset({(0,), (1,)})
    assert support(ALG.null(A)) == frozenset()
    assert z.dominates(p)
    other = ALG.make(A, [0, 1])
    assert not z.dominates(other) and not other.dominates(z)


def test_divide():
    assert np.allclose(q.divide(q.project(A)).flat, [0.25, 0.75, 1 / 3, 2 / 3])
    with pytest.raises(DominationError):
        p.divide(ALG.make(A, [1, 0]))


def test_equality_tolerance():
    one = ALG.make(vset(), [1.0])
    assert one.equals(ALG.make(vset(), [1.0 + 1e-12]), 1e-9)
    assert not p.equals(q)


def test_project_requires_subdomain():
    with pytest.raises(OrderError):
        p.project(vset("B"))


def test_values_are_validated():
    with pytest.raises(ValueError):
        ALG.make(A, [-1, 1])
    with pytest.raises(ValueError):
        ALG.make(A, [1, 2, 3])


def test_product_support_rule_brute_force(rng):
    for _ in range(50):
        x, y = ALG.random_domain(rng), ALG.random_domain(rng)
        f, g = ALG.random_valuation(rng, x), ALG.random_valuation(rng, y)
        h = f * g
        z = tuple(h.scope)
        for cfg in itertools.product(range(2), repeat=len(z)):
            at = dict(zip(z, cfg))
            fx = tuple(at[v] for v in f.scope)
            gx = tuple(at[v] for v in g.scope)
            assert (cfg in support(h)) == (fx in support(f) and gx in support(g))
            assert np.isclose(h.values[cfg], f.values[fx] * g.values[gx])


def test_axioms():
    rep = check_axioms(ALG, n=200, seed=3)
    assert rep.ok, rep.to_text()
    assert "A5prime.strong-combination" in rep and "A6.units" in rep and "A7.nulls" in rep


class OffByOne(Potential):
    """Projection whose sum over the removed configurations stops one short."""

    def project(self, x):
        self._check_below(x)
        keep = [i for i, v in enumerate(self.scope) if v in x.members]
        drop = [i for i in range(len(self.scope)) if i not in keep]
        cards = tuple(self.cards[i] for i in keep)
        vals = np.transpose(self.values, keep + drop).reshape(cards + (-1,))
        if drop:
            vals = vals[..., :-1]
        return self._make(tuple(self.scope[i] for i in keep), cards, vals.sum(axis=-1))


class MutantAlgebra(PotentialAlgebra):
    def random_valuation(self, rng, x, positive=False):
        v = super().random_valuation(rng, x, positive)
        return OffByOne(v.scope, v.cards, v.values, v.lattice)

    def unit(self, x):
        u = super().unit(x)
        return OffByOne(u.scope, u.cards, u.values, u.lattice)

    def null(self, x):
        u = super().null(x)
        return OffByOne(u.scope, u.cards, u.values, u.lattice)


def test_mutation_broken_projection_is_caught():
    rep = check_axioms(MutantAlgebra({"A": 3, "B": 2, "C": 2}), n=200, seed=0)
    broken = [r.name for r in rep.failed()]
    assert any(name.startswith(("A4", "A5")) for name in broken), broken
    assert rep["A4.transitivity"].counterexample is not None


tables = st.lists(st.floats(0, 5, allow_nan=False), min_size=4, max_size=4)


@given(tables, tables, st.lists(st.floats(0, 5), min_size=2, max_size=2))
def test_combination_commutes_and_associates(a, b, c):
    f, g, h = ALG.make(AB, a), ALG.make(vset("B", "C"), b), ALG.make(A, c)
    assert (f * g).equals(g * f)
    assert ((f * g) * h).equals(f * (g * h))


@given(st.lists(st.floats(0, 5), min_size=8, max_size=8))
def test_projection_transitive_and_mass_preserving(vals):
    f = ALG.make(vset("A", "B", "C"), vals)
    assert f.project(AB).project(A).equals(f.project(A))
    assert close(f.project(vset()).flat, [sum(vals)], 1e-9)
