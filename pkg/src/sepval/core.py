"""Abstract valuation-algebra contract and the randomized axiom harness.

Concrete instances (probability potentials, Gaussian potentials, mass
functions) subclass :class:`Valuation` for their elements and
:class:`Algebra` for everything that is not attached to a single element:
units, nulls, the finite universe of domains used by the generators, and
the declared structural flags.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass
from typing import Any, ClassVar, Hashable

import numpy as np

from .errors import ContextMismatch, OrderError, ProjectionUndefined, NotReducible, UnsupportedOperation
from .laws import LawReport
from .lattice import check_lattice_laws

DEFAULT_TOL = 1e-9
ABS_FLOOR = 1e-12


def close(a, b, tol: float = DEFAULT_TOL) -> bool:
    """Normwise relative comparison with an absolute floor.

    ``max|a-b| <= tol * max(max|a|, max|b|) + 1e-12``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        return False
    if a.size == 0:
        return True
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return bool(np.max(np.abs(a - b)) <= tol * scale + ABS_FLOOR)


def clamp(values: np.ndarray) -> np.ndarray:
    """Zero out arithmetic dust so that supports are crisp."""
    out = np.array(values, dtype=float)
    out[np.abs(out) < ABS_FLOOR] = 0.0
    return out


@dataclass(frozen=True)
class GroupTag:
    """Identity of the group a valuation falls into (its delta-class)."""

    kind: str
    domain: Any
    support: Hashable = None


class Valuation(abc.ABC):
    """An element of a valuation algebra."""

    kind: ClassVar[str] = "abstract"

    @property
    @abc.abstractmethod
    def domain(self):
        """The label d(psi)."""

    @abc.abstractmethod
    def combine(self, other: "Valuation") -> "Valuation":
        ...

    @abc.abstractmethod
    def project(self, x) -> "Valuation":
        ...

    @abc.abstractmethod
    def is_null(self) -> bool:
        ...

    @abc.abstractmethod
    def group_tag(self) -> GroupTag:
        ...

    @abc.abstractmethod
    def dominates(self, other: "Valuation") -> bool:
        """True iff delta(other) <= delta(self), i.e. f_other . f_self = f_self."""

    @abc.abstractmethod
    def equals(self, other: "Valuation", tol: float = DEFAULT_TOL) -> bool:
        ...

    def divide(self, den: "Valuation") -> "Valuation":
        """Return chi in Psi with embed(chi) == self / den, if one exists."""
        raise NotReducible(f"{self.kind} quotients have no closed form")

    def project_quotient(self, den: "Valuation", x):
        """Project the quotient self/den to ``x`` below d(den) via a concrete carrier.

        Returns a pair (num', den') of valuations on ``x``.  Instances
        without such a carrier raise ProjectionUndefined.
        """
        raise ProjectionUndefined(f"{self.kind}: no projection below the denominator domain")

    def __mul__(self, other):
        return self.combine(other)

    def _check_peer(self, other) -> None:
        if not isinstance(other, Valuation) or other.kind != self.kind:
            raise ContextMismatch(f"cannot mix {self.kind} with {getattr(other, 'kind', type(other))}")
        if other.domain.lattice != self.domain.lattice:
            raise ContextMismatch("valuations live in different lattice contexts")

    def _check_below(self, x) -> None:
        if x.lattice != self.domain.lattice:
            raise ContextMismatch(f"{x!r} is not in the context of {self.domain!r}")
        if not x <= self.domain:
            raise OrderError(f"cannot project from {self.domain} to {x}: not below")


class Algebra(abc.ABC):
    """Instance-level operations and generators for one kind of valuation."""

    name: ClassVar[str] = "abstract"
    has_units: ClassVar[bool] = False
    has_nulls: ClassVar[bool] = False
    strong_combination: ClassVar[bool] = False
    regular: ClassVar[bool] = False
    cancellative: ClassVar[bool] = False
    tol: float = DEFAULT_TOL
    lattice: Any

    def unit(self, x) -> Valuation:
        raise UnsupportedOperation(f"{self.name} has no unit elements")

    def null(self, x) -> Valuation:
        raise UnsupportedOperation(f"{self.name} has no null elements")

    @abc.abstractmethod
    def domains(self) -> list:
        """Every domain of the (finite) universe the generators draw from."""

    @abc.abstractmethod
    def random_valuation(self, rng: np.random.Generator, x, positive: bool = False) -> Valuation:
        ...

    # -- domain generators -------------------------------------------------

    def bottom(self):
        return self.lattice.bottom()

    def random_domain(self, rng: np.random.Generator):
        ds = self.domains()
        return ds[rng.integers(len(ds))]

    def random_between(self, rng: np.random.Generator, lo, hi):
        ds = [d for d in self.domains() if lo <= d and d <= hi]
        return ds[rng.integers(len(ds))]

    def random_below(self, rng: np.random.Generator, hi):
        return self.random_between(rng, self.bottom(), hi)


# ---------------------------------------------------------------------------
# Functional surface
# ---------------------------------------------------------------------------


def label(psi: Valuation):
    return psi.domain


def combine(phi: Valuation, psi: Valuation) -> Valuation:
    return phi.combine(psi)


def project(psi: Valuation, x) -> Valuation:
    return psi.project(x)


def unit(algebra: Algebra, x) -> Valuation:
    return algebra.unit(x)


def null(algebra: Algebra, x) -> Valuation:
    return algebra.null(x)


def group_tag(psi: Valuation) -> GroupTag:
    return psi.group_tag()


def dominates(phi: Valuation, psi: Valuation) -> bool:
    """delta(psi) <= delta(phi)."""
    phi._check_peer(psi)
    return phi.dominates(psi)


def equals(phi: Valuation, psi: Valuation, tol: float = DEFAULT_TOL) -> bool:
    if not isinstance(psi, Valuation) or phi.kind != psi.kind:
        return False
    return phi.equals(psi, tol)


# ---------------------------------------------------------------------------
# Axiom harness
# ---------------------------------------------------------------------------


def _desc(**vals) -> str:
    return "\n".join(f"{k} = {v!r}" for k, v in vals.items())


def check_axioms(algebra: Algebra, n: int = 1000, seed: int = 0, tol: float | None = None) -> LawReport:
    """Randomized verification of A1-A5, and A5', A6, A7 where declared.

    Failures keep the first counterexample in the report.
    """
    tol = algebra.tol if tol is None else tol
    rng = np.random.default_rng(seed)
    rep = LawReport()

    lat = check_lattice_laws(algebra.lattice, algebra.domains())
    a1 = rep.law("A1.lattice")
    for r in lat.results:
        if r.name in ("lattice.modular", "lattice.distributive"):
            continue
        a1.ncases += r.ncases
        if not r.passed:
            a1.failures += r.failures
            a1.counterexample = a1.counterexample or f"{r.name}: {r.counterexample}"

    comm = rep.law("A2.commutativity")
    assoc = rep.law("A2.associativity")
    lab_c = rep.law("A3.label-combine")
    lab_p = rep.law("A3.label-project")
    trans = rep.law("A4.transitivity")
    comb = rep.law("A5.combination")
    strong = rep.law("A5prime.strong-combination") if algebra.strong_combination else None
    if algebra.has_units:
        units = rep.law("A6.units")
    else:
        units = rep.law("A6.units-unsupported")
    nulls = rep.law("A7.nulls") if algebra.has_nulls else None

    eq = lambda a, b: equals(a, b, tol)  # noqa: E731
    for _ in range(n):
        x, y, z = (algebra.random_domain(rng) for _ in range(3))
        phi = algebra.random_valuation(rng, x)
        psi = algebra.random_valuation(rng, y)
        eta = algebra.random_valuation(rng, z)

        pq = phi * psi
        comm.record(eq(pq, psi * phi), lambda: _desc(phi=phi, psi=psi))
        assoc.record(eq(pq * eta, phi * (psi * eta)), lambda: _desc(phi=phi, psi=psi, eta=eta))
        lab_c.record(pq.domain == (x | y), lambda: _desc(phi=phi, psi=psi, label=pq.domain))

        b = algebra.random_below(rng, y)
        a = algebra.random_below(rng, b)
        pb = psi.project(b)
        lab_p.record(pb.domain == b, lambda: _desc(psi=psi, x=b))
        trans.record(eq(pb.project(a), psi.project(a)), lambda: _desc(psi=psi, x=a, y=b))

        lhs = pq.project(x)
        rhs = phi * psi.project(x & y)
        comb.record(eq(lhs, rhs), lambda: _desc(phi=phi, psi=psi, lhs=lhs, rhs=rhs))

        if strong is not None:
            w = algebra.random_between(rng, x, x | y)
            lhs = pq.project(w)
            rhs = phi * psi.project(y & w)
            strong.record(eq(lhs, rhs), lambda: _desc(phi=phi, psi=psi, z=w, lhs=lhs, rhs=rhs))

        if algebra.has_units:
            ok = eq(phi * algebra.unit(x), phi) and eq(algebra.unit(x) * algebra.unit(y), algebra.unit(x | y))
            units.record(ok, lambda: _desc(phi=phi, y=y))
        else:
            try:
                algebra.unit(x)
                units.record(False, f"unit({x}) did not raise")
            except UnsupportedOperation:
                units.record(True)

        if nulls is not None:
            zx = algebra.null(x)
            ok = eq(phi * zx, zx)
            ok &= eq(algebra.null(y).project(b), algebra.null(b))
            # pi_b(psi) is null iff psi is null; generated psi are never null
            ok &= psi.project(b).is_null() == psi.is_null()
            nulls.record(ok, lambda: _desc(phi=phi, psi=psi, x=b))
    return rep
