"""Unnormalized Dempster-Shafer mass functions: the separative instance.

Subsets of a frame with ``n`` atoms are bitmasks (bit ``i`` = atom ``i``)
and every set function is a dense numpy array of length ``2**n``.  Two
kinds of frame lattice are supported through :class:`FrameSystem`:

* multivariate frames: the domain is a variable set and its atoms are the
  configurations of those variables in row-major order, which gives a
  distributive lattice of frames;
* partition frames: the domain is a partition of a finite universe and its
  atoms are the blocks.

All translations between frames go through one primitive, the index of the
coarse atom containing each fine atom.  Refining a subset lifts it to the
union of the fine atoms inside it; coarsening takes the image of a subset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .core import Algebra, GroupTag, Valuation, clamp, close
from .errors import ContextMismatch, NotReducible, OrderError, ProjectionUndefined
from .lattice import VARIABLES, Frame, PartitionLattice, SubsetLattice, VariableSet, coarsen_index

MAX_ATOMS = 16
NEG_TOL = 1e-12


# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------


class FrameSystem:
    """Atoms of each domain and the coarsening index between comparable domains."""

    def __init__(self, lattice, cards: Mapping | None = None):
        self.lattice = lattice
        self.cards = dict(cards or {})
        if isinstance(lattice, SubsetLattice) and not self.cards:
            raise ValueError("multivariate frames need variable cardinalities")
        self._coarse = lru_cache(maxsize=None)(self._coarse_uncached)

    def __eq__(self, other):
        return isinstance(other, FrameSystem) and self.lattice == other.lattice and self.cards == other.cards

    def __hash__(self):
        return hash((self.lattice, tuple(sorted(self.cards.items(), key=lambda kv: str(kv[0])))))

    @property
    def multivariate(self) -> bool:
        return isinstance(self.lattice, SubsetLattice)

    def natoms(self, x) -> int:
        if self.multivariate:
            return int(np.prod([self.cards[v] for v in x], dtype=int))
        return len(x)

    def atom_labels(self, x) -> list:
        """Human-readable atom names: configuration tuples or blocks."""
        if self.multivariate:
            shape = [self.cards[v] for v in x]
            return [tuple(int(i) for i in ix) for ix in np.ndindex(*shape)] if shape else [()]
        return [tuple(sorted(b, key=str)) for b in x.blocks]

    def coarse_index(self, fine, coarse) -> np.ndarray:
        return self._coarse(fine, coarse)

    def _coarse_uncached(self, fine, coarse) -> np.ndarray:
        if not coarse <= fine:
            raise OrderError(f"{coarse} is not below {fine}")
        if not self.multivariate:
            return np.asarray(coarsen_index(fine, coarse), dtype=np.int64)
        scope = tuple(fine)
        shape = [self.cards[v] for v in scope]
        if not shape:
            return np.zeros(1, dtype=np.int64)
        grid = np.indices(shape).reshape(len(shape), -1)
        keep = [i for i, v in enumerate(scope) if v in coarse.members]
        if not keep:
            return np.zeros(grid.shape[1], dtype=np.int64)
        return np.ravel_multi_index(tuple(grid[keep]), tuple(shape[i] for i in keep)).astype(np.int64)


def _subset_table(atom_masks: np.ndarray) -> np.ndarray:
    """table[S] = OR of atom_masks[i] over the bits i of S, for every S."""
    table = np.zeros(1, dtype=np.int64)
    for a in atom_masks:
        table = np.concatenate([table, table | int(a)])
    return table


def image_table(system: FrameSystem, fine, coarse) -> np.ndarray:
    """Coarsening v: subset of the fine frame -> subset of the coarse frame it meets."""
    return _subset_table(np.left_shift(1, system.coarse_index(fine, coarse)))


def lift_table(system: FrameSystem, coarse, fine) -> np.ndarray:
    """Refining tau: subset of the coarse frame -> union of the fine atoms inside it."""
    idx = system.coarse_index(fine, coarse)
    atom_masks = np.zeros(system.natoms(coarse), dtype=np.int64)
    for j, c in enumerate(idx):
        atom_masks[c] |= 1 << j
    return _subset_table(atom_masks)


# ---------------------------------------------------------------------------
# Moebius transforms
# ---------------------------------------------------------------------------


def _nbits(size: int) -> int:
    n = size.bit_length() - 1
    if 1 << n != size:
        raise ValueError(f"set function length {size} is not a power of two")
    return n


def _sweep(values, superset: bool, sign: float) -> np.ndarray:
    f = np.array(values, dtype=float)
    n = _nbits(f.size)
    for i in range(n):
        v = f.reshape(-1, 2, 1 << i)
        if superset:
            v[:, 0, :] += sign * v[:, 1, :]
        else:
            v[:, 1, :] += sign * v[:, 0, :]
    return f


def mass_to_commonality(m) -> np.ndarray:
    """q(S) = sum of m(T) over T containing S."""
    return _sweep(m, superset=True, sign=1.0)


def commonality_to_mass(q) -> np.ndarray:
    """Inverse of mass_to_commonality; entries may come out negative."""
    return _sweep(q, superset=True, sign=-1.0)


def mass_to_belief(m) -> np.ndarray:
    """b(S) = sum of m(T) over T contained in S (m(empty set) included)."""
    return _sweep(m, superset=False, sign=1.0)


def belief_to_mass(b) -> np.ndarray:
    return _sweep(b, superset=False, sign=-1.0)


# ---------------------------------------------------------------------------
# Mass functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MassFunction(Valuation):
    frame: object
    masses: np.ndarray = field(repr=False)
    system: FrameSystem = field(repr=False, default=None)

    kind = "belief"

    def __post_init__(self):
        n = self.system.natoms(self.frame)
        if n > MAX_ATOMS:
            raise ValueError(f"frame with {n} atoms exceeds the {MAX_ATOMS}-atom limit")
        m = clamp(np.asarray(self.masses, dtype=float).reshape(-1))
        if m.size != 1 << n:
            raise ValueError(f"expected {1 << n} masses, got {m.size}")
        if np.any(m < 0) or not np.all(np.isfinite(m)):
            raise ValueError("masses must be finite and nonnegative")
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)

    @classmethod
    def from_focal(cls, system: FrameSystem, frame, focal: Mapping[int, float]) -> "MassFunction":
        m = np.zeros(1 << system.natoms(frame))
        for mask, v in focal.items():
            m[int(mask)] += float(v)
        return cls(frame, m, system)

    @property
    def domain(self):
        return self.frame

    @property
    def natoms(self) -> int:
        return _nbits(self.masses.size)

    def focal(self) -> dict[int, float]:
        return {int(i): float(self.masses[i]) for i in np.flatnonzero(self.masses)}

    def commonality(self) -> np.ndarray:
        return mass_to_commonality(self.masses)

    def belief(self) -> np.ndarray:
        return mass_to_belief(self.masses)

    def __repr__(self):
        items = ", ".join(f"{i:0{self.natoms}b}:{v:.6g}" for i, v in self.focal().items())
        return f"MassFunction({self.frame}, {{{items}}})"

    def _check_peer(self, other) -> None:
        super()._check_peer(other)
        if other.system != self.system:
            raise ContextMismatch("mass functions live on different frame systems")

    def combine(self, other: "MassFunction") -> "MassFunction":
        self._check_peer(other)
        return combine_mass(self, other)

    def project(self, x) -> "MassFunction":
        self._check_below(x)
        return project_mass(self, x)

    def is_null(self) -> bool:
        return not np.any(self.masses > 0)

    def commonality_support(self) -> np.ndarray:
        return self.commonality() > 0

    def group_tag(self) -> GroupTag:
        return GroupTag(self.kind, self.frame, np.packbits(self.commonality_support()).tobytes())

    def lifted_commonality(self, fine) -> np.ndarray:
        """q(v(S)) for every subset S of the finer frame ``fine``."""
        return self.commonality()[image_table(self.system, fine, self.frame)]

    def dominates(self, other: "MassFunction") -> bool:
        if not other.frame <= self.frame:
            return False
        mine = self.commonality_support()
        return bool(np.all(~mine | (other.lifted_commonality(self.frame) > 0)))

    def equals(self, other, tol: float = 1e-12) -> bool:
        return isinstance(other, MassFunction) and other.frame == self.frame and close(self.masses, other.masses, tol)

    def project_quotient(self, den: "MassFunction", x):
        """Project self/den to any x <= d(self) through signed masses.

        The quotient's commonality q_self / q_den is Moebius-transformed into
        a signed mass, coarsened to x and re-expressed as a pair of ordinary
        mass functions.  On multivariate frames combination is multilinear in
        the masses, so this agrees with the pair projection wherever that is
        defined.
        """
        self._check_peer(den)
        self._check_below(x)
        if not self.system.multivariate:
            raise ProjectionUndefined("signed-mass projection needs independent (multivariate) frames")
        Q = self.commonality()
        Qd = den.lifted_commonality(self.frame)
        pos = Q > 0
        Q = np.where(pos, Q / np.where(pos, Qd, 1.0), 0.0)
        M = commonality_to_mass(Q)
        Mx = np.bincount(image_table(self.system, self.frame, x), weights=M, minlength=1 << self.system.natoms(x))
        return signed_to_pair(mass_to_commonality(Mx), x, self.system)

    def divide(self, den: "MassFunction") -> "MassFunction":
        self._check_peer(den)
        if not den.frame <= self.frame:
            raise OrderError(f"denominator frame {den.frame} not below {self.frame}")
        return quotient_reduce_belief(self.commonality(), den.lifted_commonality(self.frame), self.frame, self.system)


def combine_mass(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Unnormalized Dempster combination on the join frame via lifted intersections."""
    sys_ = m1.system
    z = m1.frame | m2.frame
    f1, f2 = np.flatnonzero(m1.masses), np.flatnonzero(m2.masses)
    l1 = lift_table(sys_, m1.frame, z)[f1]
    l2 = lift_table(sys_, m2.frame, z)[f2]
    inter = np.bitwise_and.outer(l1, l2).ravel()
    w = np.outer(m1.masses[f1], m2.masses[f2]).ravel()
    out = np.bincount(inter, weights=w, minlength=1 << sys_.natoms(z))
    return MassFunction(z, out, sys_)


def combine_commonality(m1: MassFunction, m2: MassFunction) -> np.ndarray:
    """Commonality of the combination: q(S) = q1(v1(S)) q2(v2(S)) on the join frame."""
    z = m1.frame | m2.frame
    return m1.lifted_commonality(z) * m2.lifted_commonality(z)


def project_mass(m: MassFunction, x) -> MassFunction:
    """Coarsen every focal set to the frame ``x`` and add up the masses."""
    if x == m.frame:
        return m
    img = image_table(m.system, m.frame, x)
    out = np.bincount(img, weights=m.masses, minlength=1 << m.system.natoms(x))
    return MassFunction(x, out, m.system)


def quotient_reduce_belief(q_num: np.ndarray, q_den: np.ndarray, frame, system: FrameSystem) -> MassFunction:
    """Mass function whose commonality is q_num / q_den on supp(q_num), or NotReducible."""
    q_num = np.asarray(q_num, dtype=float)
    q_den = np.asarray(q_den, dtype=float)
    pos = q_num > 0
    if np.any(pos & (q_den <= 0)):
        raise NotReducible("denominator commonality vanishes inside the numerator support")
    q = np.where(pos, q_num / np.where(pos, q_den, 1.0), 0.0)
    m = signed_mass(q)
    worst = float(m.min()) if m.size else 0.0
    if worst < -NEG_TOL * max(1.0, float(np.max(np.abs(m)))):
        idx = int(np.argmin(m))
        raise NotReducible(f"Moebius transform has negative mass {worst:.6g} at subset {idx:0{_nbits(m.size)}b}")
    return MassFunction(frame, np.maximum(m, 0.0), system)


def _cardinalities(n: int) -> np.ndarray:
    return np.array([bin(i).count("1") for i in range(1 << n)])


def signed_to_pair(Q: np.ndarray, frame, system: FrameSystem, max_halvings: int = 30):
    """Mass functions (num, den) on ``frame`` with q_num / q_den = Q on supp(Q).

    den has commonality e^(|S| - n), a full-support function, and num has
    commonality Q(S) e^(|S| - n); e is halved until num is nonnegative.
    """
    Q = clamp(Q)
    scale = max(1.0, float(np.max(np.abs(Q))))
    if np.any(Q < -NEG_TOL * scale):
        raise ProjectionUndefined("projected commonality is negative")
    n = _nbits(Q.size)
    card = _cardinalities(n)
    eps = 0.5
    for _ in range(max_halvings):
        qd = eps ** (card - n).astype(float)
        mn = signed_mass(Q * qd)
        if np.all(mn >= -NEG_TOL * max(1.0, float(np.max(np.abs(mn))))):
            return MassFunction(frame, np.maximum(mn, 0.0), system), MassFunction(frame, signed_mass(qd), system)
        eps /= 2.0
    raise ProjectionUndefined("no nonnegative representative found for the projected quotient")


def signed_mass(q) -> np.ndarray:
    """Moebius transform of a commonality, clamped but keeping its sign."""
    return clamp(commonality_to_mass(q))


# ---------------------------------------------------------------------------
# Algebra
# ---------------------------------------------------------------------------


class BeliefAlgebra(Algebra):
    name = "belief"
    has_units = True
    has_nulls = True

    def __init__(self, system: FrameSystem, domains: list | None = None, tol: float = 1e-12,
                 max_focal: int = 5, empty_prob: float = 0.1):
        self.system = system
        self.lattice = system.lattice
        self.tol = tol
        self.max_focal = max_focal
        self.empty_prob = empty_prob
        if domains is None:
            if system.multivariate:
                domains = system.lattice.elements(system.cards)
            else:
                domains = system.lattice.elements()
        self._domains = list(domains)

    @classmethod
    def multivariate(cls, cards: Mapping | None = None, **kw) -> "BeliefAlgebra":
        return cls(FrameSystem(VARIABLES, cards or {"A": 2, "B": 2}), **kw)

    @classmethod
    def partitions(cls, universe=(1, 2, 3, 4), **kw) -> "BeliefAlgebra":
        return cls(FrameSystem(PartitionLattice(tuple(universe))), **kw)

    @property
    def strong_combination(self) -> bool:  # units plus a distributive frame lattice
        return self.system.multivariate

    def domains(self) -> list:
        return self._domains

    def full_mask(self, x) -> int:
        return (1 << self.system.natoms(x)) - 1

    def unit(self, x) -> MassFunction:
        return MassFunction.from_focal(self.system, x, {self.full_mask(x): 1.0})

    def null(self, x) -> MassFunction:
        return MassFunction(x, np.zeros(1 << self.system.natoms(x)), self.system)

    def make(self, x, focal: Mapping[int, float]) -> MassFunction:
        return MassFunction.from_focal(self.system, x, focal)

    def random_valuation(self, rng, x, positive: bool = False) -> MassFunction:
        full = self.full_mask(x)
        k = int(rng.integers(1, self.max_focal + 1))
        focal = {}
        for _ in range(k):
            if full and rng.random() >= self.empty_prob:
                s = int(rng.integers(1, full + 1))
            else:
                s = 0
            focal[s] = focal.get(s, 0.0) + float(rng.uniform(0.1, 1.0))
        if positive:
            focal[full] = focal.get(full, 0.0) + float(rng.uniform(0.1, 1.0))
        return self.make(x, focal)


def regularity_witness(system: FrameSystem | None = None):
    """A stored quotient that does not reduce: the inverse of a simple support function.

    Returns (mass function m, signed mass of 1/q_m).  The inverse has mass
    -1 on the singleton {a}, so no mass function represents it.
    """
    system = system or FrameSystem(PartitionLattice(("a", "b")))
    frame = system.lattice.top()
    m = MassFunction.from_focal(system, frame, {0b01: 0.5, 0b11: 0.5})
    q = m.commonality()
    inv = np.where(q > 0, 1.0 / np.where(q > 0, q, 1.0), 0.0)
    return m, signed_mass(inv)
