"""Domain lattices: finite variable sets and partitions (frames) of a finite universe.

Two lattice contexts are provided.  :class:`SubsetLattice` orders finite
sets of variables by inclusion (a distributive lattice).
:class:`PartitionLattice` orders the partitions of a finite universe by
refinement, coarser below finer, so the join of two partitions is their
common refinement and the meet their finest common coarsening.

Domains remember the context they belong to; mixing contexts raises
:class:`ContextMismatch`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Union

from .errors import ContextMismatch, DomainSyntaxError, OrderError
from .laws import LawReport


def var_key(v):
    """Sort key putting integers (numerically) before strings (lexicographically)."""
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


def sort_vars(vs: Iterable) -> tuple:
    return tuple(sorted(vs, key=var_key))


# ---------------------------------------------------------------------------
# Subset lattice
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubsetLattice:
    """Lattice of finite subsets of a family of variables."""

    name: str = "variables"
    kind = "subset"
    is_modular = True
    is_distributive = True

    def domain(self, members: Iterable = ()) -> "VariableSet":
        return VariableSet(frozenset(members), self)

    def bottom(self) -> "VariableSet":
        return VariableSet(frozenset(), self)

    def contains(self, x) -> bool:
        return isinstance(x, VariableSet) and x.lattice == self

    def _check(self, *xs) -> None:
        for x in xs:
            if not self.contains(x):
                raise ContextMismatch(f"{x!r} does not belong to {self!r}")

    def join(self, x: "VariableSet", y: "VariableSet") -> "VariableSet":
        self._check(x, y)
        return VariableSet(x.members | y.members, self)

    def meet(self, x: "VariableSet", y: "VariableSet") -> "VariableSet":
        self._check(x, y)
        return VariableSet(x.members & y.members, self)

    def leq(self, x: "VariableSet", y: "VariableSet") -> bool:
        self._check(x, y)
        return x.members <= y.members

    def elements(self, variables: Iterable) -> list["VariableSet"]:
        """All subsets of ``variables``, smallest first."""
        vs = sort_vars(variables)
        return [
            VariableSet(frozenset(c), self)
            for k in range(len(vs) + 1)
            for c in itertools.combinations(vs, k)
        ]

    def parse(self, text: str) -> "VariableSet":
        return parse_variable_set(text, self)


VARIABLES = SubsetLattice()


@dataclass(frozen=True)
class VariableSet:
    members: frozenset
    lattice: SubsetLattice = VARIABLES

    @cached_property
    def sorted(self) -> tuple:
        return sort_vars(self.members)

    def __or__(self, other):
        return self.lattice.join(self, other)

    def __and__(self, other):
        return self.lattice.meet(self, other)

    def __le__(self, other):
        return self.lattice.leq(self, other)

    def __lt__(self, other):
        return self.lattice.leq(self, other) and self != other

    def __ge__(self, other):
        return self.lattice.leq(other, self)

    def __gt__(self, other):
        return self.lattice.leq(other, self) and self != other

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted)

    def __str__(self):
        return "{" + ",".join(str(v) for v in self.sorted) + "}"

    def __repr__(self):
        return f"VariableSet({self})"


def vset(*members, lattice: SubsetLattice = VARIABLES) -> VariableSet:
    """Shorthand: ``vset("A", "B")`` is the variable set {A,B}."""
    return VariableSet(frozenset(members), lattice)


# ---------------------------------------------------------------------------
# Partition lattice
# ---------------------------------------------------------------------------


def _canonical_blocks(blocks: Iterable[Iterable]) -> tuple[frozenset, ...]:
    bs = [frozenset(b) for b in blocks]
    return tuple(sorted(bs, key=lambda b: var_key(min(b, key=var_key))))


@dataclass(frozen=True)
class PartitionLattice:
    """Lattice of partitions of a finite universe; P1 <= P2 iff P2 is finer."""

    universe: tuple
    kind = "partition"

    def __post_init__(self):
        object.__setattr__(self, "universe", sort_vars(set(self.universe)))

    def frame(self, blocks: Iterable[Iterable]) -> "Frame":
        return Frame(_canonical_blocks(blocks), self)

    def bottom(self) -> "Frame":
        return Frame((frozenset(self.universe),), self)

    def top(self) -> "Frame":
        return Frame(tuple(frozenset([a]) for a in self.universe), self)

    def contains(self, x) -> bool:
        return isinstance(x, Frame) and x.lattice == self

    def _check(self, *xs) -> None:
        for x in xs:
            if not self.contains(x):
                raise ContextMismatch(f"{x!r} does not belong to {self!r}")

    def join(self, x: "Frame", y: "Frame") -> "Frame":
        self._check(x, y)
        blocks = [a & b for a in x.blocks for b in y.blocks if a & b]
        return Frame(_canonical_blocks(blocks), self)

    def meet(self, x: "Frame", y: "Frame") -> "Frame":
        # blocks of the meet = connected components of the overlap graph
        self._check(x, y)
        parent = {a: a for a in self.universe}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for block in itertools.chain(x.blocks, y.blocks):
            it = iter(block)
            first = find(next(it))
            for a in it:
                r = find(a)
                if r != first:
                    parent[r] = first
        comps: dict = {}
        for a in self.universe:
            comps.setdefault(find(a), set()).add(a)
        return Frame(_canonical_blocks(comps.values()), self)

    def leq(self, x: "Frame", y: "Frame") -> bool:
        self._check(x, y)
        return all(any(b <= a for a in x.blocks) for b in y.blocks)

    def elements(self) -> list["Frame"]:
        return [Frame(bs, self) for bs in _all_partitions(self.universe)]

    @cached_property
    def is_modular(self) -> bool:
        if len(self.universe) <= 5:
            return _exhaustive_flags(self)[0]
        return False  # partition lattices on >= 4 atoms are never modular

    @cached_property
    def is_distributive(self) -> bool:
        if len(self.universe) <= 5:
            return _exhaustive_flags(self)[1]
        return False

    def parse(self, text: str) -> "Frame":
        return parse_frame(text, self)


@dataclass(frozen=True)
class Frame:
    """A partition of the universe, viewed as the set of its blocks."""

    blocks: tuple
    lattice: PartitionLattice

    def __post_init__(self):
        seen: set = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block in partition")
            if seen & b:
                raise ValueError("blocks of a partition must be disjoint")
            seen |= b
        if seen != set(self.lattice.universe):
            raise ValueError("blocks do not cover the universe")

    def __or__(self, other):
        return self.lattice.join(self, other)

    def __and__(self, other):
        return self.lattice.meet(self, other)

    def __le__(self, other):
        return self.lattice.leq(self, other)

    def __lt__(self, other):
        return self.lattice.leq(self, other) and self != other

    def __ge__(self, other):
        return self.lattice.leq(other, self)

    def __gt__(self, other):
        return self.lattice.leq(other, self) and self != other

    def __len__(self):
        return len(self.blocks)

    def block_index(self, atom) -> int:
        for i, b in enumerate(self.blocks):
            if atom in b:
                return i
        raise KeyError(atom)

    def __str__(self):
        return "[" + ",".join("[" + ",".join(str(a) for a in sort_vars(b)) + "]" for b in self.blocks) + "]"

    def __repr__(self):
        return f"Frame({self})"


Domain = Union[VariableSet, Frame]


def _all_partitions(universe: tuple) -> list[tuple[frozenset, ...]]:
    out = []

    def rec(i, blocks):
        if i == len(universe):
            out.append(_canonical_blocks(blocks))
            return
        a = universe[i]
        for j in range(len(blocks)):
            blocks[j].add(a)
            rec(i + 1, blocks)
            blocks[j].discard(a)
        blocks.append({a})
        rec(i + 1, blocks)
        blocks.pop()

    rec(0, [])
    return out


@lru_cache(maxsize=None)
def _exhaustive_flags(ctx: PartitionLattice) -> tuple[bool, bool]:
    els = ctx.elements()
    modular = distributive = True
    for x, y, z in itertools.product(els, repeat=3):
        if distributive and x & (y | z) != (x & y) | (x & z):
            distributive = False
        if modular and z <= y and y & (x | z) != (x & y) | z:
            modular = False
        if not modular and not distributive:
            break
    return modular, distributive


# ---------------------------------------------------------------------------
# Context-explicit operations
# ---------------------------------------------------------------------------


def join(ctx, x, y):
    return ctx.join(x, y)


def meet(ctx, x, y):
    return ctx.meet(x, y)


def leq(ctx, x, y) -> bool:
    return ctx.leq(x, y)


def lattice_of(x: Domain):
    return x.lattice


# ---------------------------------------------------------------------------
# Refining and coarsening between frames.  Subsets of a frame are bitmasks
# over its canonical block order.
# ---------------------------------------------------------------------------


def blocks_to_mask(frame: Frame, blocks: Iterable) -> int:
    mask = 0
    for b in blocks:
        mask |= 1 << frame.blocks.index(frozenset(b))
    return mask


def mask_to_blocks(frame: Frame, mask: int) -> list[frozenset]:
    return [b for i, b in enumerate(frame.blocks) if mask >> i & 1]


def coarsen_index(fine: Frame, coarse: Frame) -> list[int]:
    """For each block of ``fine``, the index of the ``coarse`` block containing it."""
    if not coarse <= fine:
        raise OrderError(f"{coarse} is not coarser than {fine}")
    return [coarse.block_index(next(iter(b))) for b in fine.blocks]


def refining_map(S: int, theta: Frame, lam: Frame) -> int:
    """Blocks of ``lam`` contained in some block of ``S`` (a subset of ``theta``)."""
    idx = coarsen_index(lam, theta)
    return sum(1 << i for i, j in enumerate(idx) if S >> j & 1)


def coarsening_map(T: int, theta: Frame, lam: Frame) -> int:
    """Blocks of ``theta`` whose refinement meets ``T`` (a subset of ``lam``)."""
    idx = coarsen_index(lam, theta)
    out = 0
    for i, j in enumerate(idx):
        if T >> i & 1:
            out |= 1 << j
    return out


# ---------------------------------------------------------------------------
# Law probes
# ---------------------------------------------------------------------------


def check_lattice_laws(ctx, sample: list) -> LawReport:
    """Check lattice identities on all pairs/triples drawn from ``sample``.

    The modular law is checked on triples with ``z <= y``; the distributive
    law on every triple.
    """
    rep = LawReport()
    idem = rep.law("lattice.idempotence")
    comm = rep.law("lattice.commutativity")
    absorb = rep.law("lattice.absorption")
    order = rep.law("lattice.leq-consistency")
    assoc = rep.law("lattice.associativity")
    modular = rep.law("lattice.modular")
    distrib = rep.law("lattice.distributive")
    J, M, L = ctx.join, ctx.meet, ctx.leq
    for x in sample:
        idem.record(J(x, x) == x and M(x, x) == x, lambda: f"x={x}")
    for x, y in itertools.product(sample, repeat=2):
        comm.record(J(x, y) == J(y, x) and M(x, y) == M(y, x), lambda: f"x={x} y={y}")
        absorb.record(M(x, J(x, y)) == x and J(x, M(x, y)) == x, lambda: f"x={x} y={y}")
        le = L(x, y)
        order.record(le == (J(x, y) == y) and le == (M(x, y) == x), lambda: f"x={x} y={y}")
    for x, y, z in itertools.product(sample, repeat=3):
        assoc.record(
            J(J(x, y), z) == J(x, J(y, z)) and M(M(x, y), z) == M(x, M(y, z)),
            lambda: f"x={x} y={y} z={z}",
        )
        if L(z, y):
            modular.record(M(y, J(x, z)) == J(M(x, y), z), lambda: f"x={x} y={y} z={z}")
        distrib.record(M(x, J(y, z)) == J(M(x, y), M(x, z)), lambda: f"x={x} y={y} z={z}")
    return rep


def check_partition_bounds(ctx: PartitionLattice) -> LawReport:
    """Exhaustively confirm join/meet are the least upper / greatest lower bounds."""
    rep = LawReport()
    lub = rep.law("lattice.join-is-lub")
    glb = rep.law("lattice.meet-is-glb")
    els = ctx.elements()
    for x, y in itertools.product(els, repeat=2):
        j, m = x | y, x & y
        uppers = [u for u in els if x <= u and y <= u]
        lowers = [w for w in els if w <= x and w <= y]
        lub.record(j in uppers and all(j <= u for u in uppers), lambda: f"x={x} y={y} join={j}")
        glb.record(m in lowers and all(w <= m for w in lowers), lambda: f"x={x} y={y} meet={m}")
    return rep


# ---------------------------------------------------------------------------
# Textual syntax: variable sets as {A,B}, partitions as [[1,2],[3,4]]
# ---------------------------------------------------------------------------


def _atom(tok: str):
    tok = tok.strip()
    if re.fullmatch(r"-?\d+", tok):
        return int(tok)
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
        raise DomainSyntaxError(f"bad identifier {tok!r}")
    return tok


def parse_variable_set(text: str, lattice: SubsetLattice = VARIABLES) -> VariableSet:
    t = text.strip()
    if not (t.startswith("{") and t.endswith("}")):
        raise DomainSyntaxError(f"variable set must look like {{A,B}}: {text!r}")
    inner = t[1:-1].strip()
    members = [_atom(s) for s in inner.split(",")] if inner else []
    if len(set(members)) != len(members):
        raise DomainSyntaxError(f"duplicate variable in {text!r}")
    return VariableSet(frozenset(members), lattice)


def parse_frame(text: str, lattice: PartitionLattice) -> Frame:
    t = re.sub(r"\s+", "", text)
    if not re.fullmatch(r"\[(\[[^\[\]]+\](,\[[^\[\]]+\])*)?\]", t):
        raise DomainSyntaxError(f"partition must look like [[1,2],[3,4]]: {text!r}")
    blocks = [[_atom(a) for a in b.split(",")] for b in re.findall(r"\[([^\[\]]+)\]", t)]
    try:
        return lattice.frame(blocks)
    except ValueError as exc:
        raise DomainSyntaxError(f"{text!r}: {exc}") from None


def parse_domain(text: str, ctx) -> Domain:
    return ctx.parse(text)


def check_lattice_suite(universe=(1, 2, 3, 4), variables=tuple("ABCDEFGH"), n: int = 1000, seed: int = 0) -> LawReport:
    """Exhaustive partition-lattice laws plus random distributivity triples on subsets.

    On partitions, join/meet must be lattice operations and least upper and
    greatest lower bounds, and at least one triple must violate
    distributivity (the lattice is not distributive).
    """
    import random

    rep = LawReport()
    ctx = PartitionLattice(tuple(universe))
    els = ctx.elements()
    laws = check_lattice_laws(ctx, els)
    for name in ("idempotence", "commutativity", "absorption", "leq-consistency", "associativity"):
        src = laws["lattice." + name]
        dst = rep.law("L.partition." + name)
        dst.ncases, dst.failures, dst.counterexample = src.ncases, src.failures, src.counterexample
    for law in check_partition_bounds(ctx).results:
        dst = rep.law("L.partition." + law.name.split(".", 1)[1])
        dst.ncases, dst.failures, dst.counterexample = law.ncases, law.failures, law.counterexample
    dist = laws["lattice.distributive"]
    witness = rep.law("L.partition.distributivity-fails")
    witness.record(dist.failures > 0, "no triple violates distributivity")

    rng = random.Random(seed)
    sub = SubsetLattice()
    law = rep.law("L.subset.distributive")
    for _ in range(n):
        x, y, z = (VariableSet(frozenset(v for v in variables if rng.random() < 0.5), sub) for _ in range(3))
        law.record(x & (y | z) == (x & y) | (x & z) and x | (y & z) == (x | y) & (x | z), lambda: f"x={x} y={y} z={z}")
    return rep
