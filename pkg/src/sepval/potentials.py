"""Probability potentials on finite variable frames: the regular instance.

A potential on scope ``s`` is a nonnegative table over the Cartesian
product of the variables' value sets, stored as a dense numpy array whose
axes follow the sorted scope (row-major flattening).  Division is total:
reciprocals are taken on the support and are zero elsewhere, so every
quotient of potentials is again a potential.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .core import ABS_FLOOR, DEFAULT_TOL, Algebra, GroupTag, Valuation, clamp, close
from .errors import ContextMismatch, DominationError, NullValuationError, OrderError
from .lattice import VARIABLES, SubsetLattice, VariableSet, sort_vars


@dataclass(frozen=True, eq=False)
class Potential(Valuation):
    scope: tuple
    cards: tuple
    values: np.ndarray = field(repr=False)
    lattice: SubsetLattice = VARIABLES

    kind = "potential"

    def __post_init__(self):
        vals = clamp(np.asarray(self.values, dtype=float).reshape(self.cards))
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ValueError("potential values must be finite and nonnegative")
        if tuple(sort_vars(self.scope)) != tuple(self.scope):
            raise ValueError("scope must be sorted")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_flat(cls, domain, cards: Mapping, flat, lattice: SubsetLattice = VARIABLES) -> "Potential":
        """Build from a variable set, a cardinality mapping and row-major values."""
        scope = tuple(domain) if isinstance(domain, VariableSet) else sort_vars(domain)
        shape = tuple(int(cards[v]) for v in scope)
        flat = np.asarray(flat, dtype=float)
        if flat.size != int(np.prod(shape, dtype=int)):
            raise ValueError(f"expected {int(np.prod(shape, dtype=int))} values for {scope}, got {flat.size}")
        return cls(scope, shape, flat.reshape(shape), lattice)

    def _make(self, scope, cards, values) -> "Potential":
        return type(self)(tuple(scope), tuple(cards), values, self.lattice)

    @property
    def domain(self) -> VariableSet:
        return VariableSet(frozenset(self.scope), self.lattice)

    @property
    def card_map(self) -> dict:
        return dict(zip(self.scope, self.cards))

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()

    def __repr__(self):
        vals = ", ".join(f"{v:.6g}" for v in self.flat)
        return f"Potential({self.domain}, cards={self.cards}, [{vals}])"

    # -- alignment helpers -------------------------------------------------

    def _union(self, other: "Potential"):
        cm = self.card_map
        for v, c in other.card_map.items():
            if cm.setdefault(v, c) != c:
                raise ContextMismatch(f"variable {v} has cardinality {cm[v]} and {c}")
        scope = sort_vars(cm)
        return scope, tuple(cm[v] for v in scope)

    def expand(self, scope) -> np.ndarray:
        """Values reshaped to broadcast against a table over the superset ``scope``."""
        mine = set(self.scope)
        shape = [self.card_map[v] if v in mine else 1 for v in scope]
        return self.values.reshape(shape)

    # -- algebra -------------------------------------------------------------

    def combine(self, other: "Potential") -> "Potential":
        self._check_peer(other)
        scope, cards = self._union(other)
        return self._make(scope, cards, self.expand(scope) * other.expand(scope))

    def project(self, x: VariableSet) -> "Potential":
        self._check_below(x)
        keep = set(x.members)
        axes = tuple(i for i, v in enumerate(self.scope) if v not in keep)
        scope = tuple(v for v in self.scope if v in keep)
        cards = tuple(c for v, c in zip(self.scope, self.cards) if v in keep)
        return self._make(scope, cards, self.values.sum(axis=axes).reshape(cards))

    def is_null(self) -> bool:
        return not np.any(self.values > 0)

    def support(self) -> frozenset:
        """Configurations (tuples of value indices) with positive value."""
        return frozenset(tuple(int(i) for i in ix) for ix in np.argwhere(self.values > 0))

    def group_tag(self) -> GroupTag:
        return GroupTag(self.kind, self.domain, self.support())

    def dominates(self, other: "Potential") -> bool:
        if not other.domain <= self.domain:
            return False
        return bool(np.all((self.values <= 0) | (other.expand(self.scope) > 0)))

    def equals(self, other, tol: float = DEFAULT_TOL) -> bool:
        return (
            isinstance(other, Potential)
            and self.scope == other.scope
            and self.cards == other.cards
            and close(self.values, other.values, tol)
        )

    def invert(self) -> "Potential":
        if self.is_null():
            raise NullValuationError("the null potential has no inverse")
        v = self.values
        return self._make(self.scope, self.cards, np.where(v > 0, 1.0 / np.where(v > 0, v, 1.0), 0.0))

    def divide(self, den: "Potential") -> "Potential":
        self._check_peer(den)
        if not den.domain <= self.domain:
            raise OrderError(f"denominator domain {den.domain} not below {self.domain}")
        d = np.broadcast_to(den.expand(self.scope), self.values.shape)
        if np.any((self.values > 0) & (d <= 0)):
            raise DominationError("numerator support exceeds denominator support")
        out = np.where(d > 0, self.values / np.where(d > 0, d, 1.0), 0.0)
        return self._make(self.scope, self.cards, out)


# Functional names used across the package -------------------------------


def combine_tables(p: Potential, q: Potential) -> Potential:
    return p.combine(q)


def project_table(p: Potential, t: VariableSet) -> Potential:
    return p.project(t)


def invert_table(p: Potential) -> Potential:
    return p.invert()


def support(p: Potential) -> frozenset:
    return p.support()


class PotentialAlgebra(Algebra):
    """Potentials over a fixed family of variables with known cardinalities."""

    name = "potentials"
    has_units = True
    has_nulls = True
    strong_combination = True  # units + distributive subset lattice
    regular = True

    def __init__(self, cards: Mapping, lattice: SubsetLattice = VARIABLES, tol: float = DEFAULT_TOL,
                 zero_prob: float = 0.25):
        self.cards = dict(cards)
        self.lattice = lattice
        self.tol = tol
        self.zero_prob = zero_prob
        self._domains = lattice.elements(self.cards)

    def domains(self) -> list:
        return self._domains

    def _shape(self, x: VariableSet) -> tuple:
        return tuple(self.cards[v] for v in x)

    def make(self, x: VariableSet, flat) -> Potential:
        return Potential.from_flat(x, self.cards, flat, self.lattice)

    def unit(self, x: VariableSet) -> Potential:
        return Potential(tuple(x), self._shape(x), np.ones(self._shape(x)), self.lattice)

    def null(self, x: VariableSet) -> Potential:
        return Potential(tuple(x), self._shape(x), np.zeros(self._shape(x)), self.lattice)

    def random_valuation(self, rng, x, positive: bool = False) -> Potential:
        shape = self._shape(x)
        vals = rng.uniform(0.1, 2.0, size=shape)
        if not positive and vals.size > 1:
            mask = rng.random(shape) < self.zero_prob
            if mask.all():
                mask.flat[rng.integers(mask.size)] = False
            vals = np.where(mask, 0.0, vals)
        return Potential(tuple(x), shape, vals, self.lattice)

    def configurations(self, x: VariableSet):
        return itertools.product(*(range(self.cards[v]) for v in x))


__all__ = [
    "Potential",
    "PotentialAlgebra",
    "combine_tables",
    "project_table",
    "invert_table",
    "support",
    "ABS_FLOOR",
]
