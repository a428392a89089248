"""Formal quotients [num, den]: the group extension of a separative algebra.

A quotient stands for ``num * den^-1``.  It is kept as a pair of tuples of
factors so that products never need an inverse; ``num`` and ``den`` are the
combined products.  The pair must satisfy ``d(den) <= d(num)`` and
``delta(den) <= delta(num)``; an empty denominator means "no division".

Instance-specific closed forms are reached only through :meth:`reduce`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce as _fold

import numpy as np

from .core import DEFAULT_TOL, Algebra, GroupTag, Valuation
from .errors import (
    ContextMismatch,
    DominationError,
    NotReducible,
    NullValuationError,
    OrderError,
    ProjectionUndefined,
)
from .laws import LawReport


def _product(factors):
    return _fold(lambda a, b: a.combine(b), factors)


@dataclass(frozen=True, eq=False)
class Quotient:
    nums: tuple
    dens: tuple = ()

    def __post_init__(self):
        if not self.nums:
            raise ValueError("a quotient needs at least one numerator factor")
        kinds = {f.kind for f in self.nums + self.dens}
        if len(kinds) != 1:
            raise ContextMismatch(f"quotient mixes instances {sorted(kinds)}")
        if self.dens:
            if self.den.is_null():
                raise NullValuationError("denominator is a null valuation")
            if not self.den.domain <= self.num.domain:
                raise OrderError(f"d(den)={self.den.domain} is not below d(num)={self.num.domain}")
            if not self.num.dominates(self.den):
                raise DominationError("the numerator does not dominate the denominator")

    @classmethod
    def of(cls, num: Valuation, den: Valuation | None = None) -> "Quotient":
        return cls((num,), () if den is None else (den,))

    @cached_property
    def num(self) -> Valuation:
        return _product(self.nums)

    @cached_property
    def den(self) -> Valuation | None:
        return _product(self.dens) if self.dens else None

    @property
    def kind(self) -> str:
        return self.nums[0].kind

    @property
    def domain(self):
        return self.num.domain

    @property
    def den_domain(self):
        return self.den.domain if self.dens else None

    def group_tag(self) -> GroupTag:
        return self.num.group_tag()

    def dominates(self, other: "Quotient") -> bool:
        return self.num.dominates(other.num)

    def __mul__(self, other):
        return multiply(self, other)

    def __repr__(self):
        return f"Quotient(num={self.num!r}, den={self.den!r})"

    def reduce(self) -> Valuation:
        return reduce(self)

    def project(self, x) -> "Quotient":
        return project0(self, x)


def _simplify(nums: tuple, dens: tuple, tol: float = DEFAULT_TOL) -> tuple[tuple, tuple]:
    """Cancel denominator factors that are literally present in the numerator.

    Removing d from both sides drops a factor f_d, so a cancellation is kept
    only when the remaining numerator dominates d (and still dominates the
    remaining denominator).  The represented class is then unchanged.
    """
    nums, dens = list(nums), list(dens)
    changed = True
    while changed and dens:
        changed = False
        for j, d in enumerate(dens):
            for i, n in enumerate(nums):
                if len(nums) > 1 and n is d:
                    rest_n = nums[:i] + nums[i + 1:]
                    rest_d = dens[:j] + dens[j + 1:]
                    rn = _product(rest_n)
                    # d/d is the idempotent f_d, which rest_n absorbs only if it dominates d
                    if not (d.domain <= rn.domain and rn.dominates(d)):
                        continue
                    if rest_d:
                        rd = _product(rest_d)
                        if not (rd.domain <= rn.domain and rn.dominates(rd)):
                            continue
                    nums, dens = rest_n, rest_d
                    changed = True
                    break
            if changed:
                break
    return tuple(nums), tuple(dens)


def embed(psi: Valuation) -> Quotient:
    """psi -> [psi . psi, psi]."""
    if psi.is_null():
        raise NullValuationError("cannot embed a null valuation")
    return Quotient((psi, psi), (psi,))


def as_quotient(v) -> Quotient:
    return v if isinstance(v, Quotient) else embed(v)


def multiply(q1: Quotient, q2: Quotient) -> Quotient:
    q1, q2 = as_quotient(q1), as_quotient(q2)
    if q1.kind != q2.kind:
        raise ContextMismatch(f"cannot multiply {q1.kind} and {q2.kind} quotients")
    nums, dens = _simplify(q1.nums + q2.nums, q1.dens + q2.dens)
    num = _product(nums)
    if num.is_null():  # the null element absorbs everything, denominators included
        return Quotient((num,))
    return Quotient(nums, dens)


def invert(q: Quotient) -> Quotient:
    """The group inverse, as [den . num, num . num].

    Swapping num and den is only a valid representative when both lie in the
    same group; multiplying through by num gives a representative that always
    satisfies the pair conditions and stands for the same class.
    """
    q = as_quotient(q)
    if q.num.is_null():  # the null element forms a one-element group
        return Quotient((q.num,))
    return Quotient(q.dens + q.nums, q.nums + q.nums)


def idempotent_of(q: Quotient) -> Quotient:
    """The unit f of the group of q, as [num, num]."""
    q = as_quotient(q)
    if q.num.is_null():
        return Quotient((q.num,))
    return Quotient(q.nums, q.nums)


def label0(q: Quotient):
    return as_quotient(q).domain


def equals0(q1: Quotient, q2: Quotient, tol: float = DEFAULT_TOL) -> bool:
    """[a, b] == [c, d] iff both lie in one group and a . d == b . c."""
    q1, q2 = as_quotient(q1), as_quotient(q2)
    if q1.kind != q2.kind or q1.domain != q2.domain:
        return False
    if q1.group_tag() != q2.group_tag():
        return False
    lhs = _product(q1.nums + q2.dens)
    rhs = _product(q2.nums + q1.dens)
    return lhs.equals(rhs, tol)


def project0(q: Quotient, x) -> Quotient:
    """pi_x([num, den]) = [pi_x(num), den] for d(den) <= x <= d(num).

    Factors shared verbatim by numerator and denominator are cancelled first,
    so embedded members project to every domain below their label.
    """
    q = as_quotient(q)
    if not x <= q.domain:
        raise OrderError(f"cannot project from {q.domain} to {x}: not below")
    if x == q.domain:
        return q
    # cancelling shared factors may lower the denominator domain
    q = Quotient(*_simplify(q.nums, q.dens))
    if q.dens and not q.den_domain <= x:
        raise ProjectionUndefined(f"{x} is not above the denominator domain {q.den_domain}")
    return Quotient((q.num.project(x),), q.dens and (q.den,))


def reduce(q: Quotient) -> Valuation:
    """A member psi of the algebra with embed(psi) == q, or NotReducible."""
    q = as_quotient(q)
    if not q.dens:
        return q.num
    return q.num.divide(q.den)


def try_reduce(q: Quotient):
    try:
        return reduce(q)
    except NotReducible:
        return None


# ---------------------------------------------------------------------------
# Law suite
# ---------------------------------------------------------------------------


def _random_quotient(algebra: Algebra, rng, x=None, w=None) -> Quotient:
    """Quotients [phi . chi, eta . chi] with d(eta), d(chi) <= d(phi).

    The numerator includes chi so that domination holds.  Half of the time
    eta is a fresh valuation, which usually leaves the image of the
    embedding; otherwise the quotient is [phi . chi, chi] = phi . f_chi.
    """
    x = algebra.random_domain(rng) if x is None else x
    w = algebra.random_below(rng, x) if w is None else w
    phi = algebra.random_valuation(rng, x)
    chi = algebra.random_valuation(rng, w)
    if rng.random() < 0.5:
        eta = algebra.random_valuation(rng, algebra.random_below(rng, w))
        if not (eta * chi).is_null() and (phi * chi).dominates(eta * chi):
            return Quotient((phi, chi), (eta, chi))
    return Quotient((phi, chi), (chi,))


def check_separative(algebra: Algebra, n: int = 500, seed: int = 0, tol: float | None = None) -> LawReport:
    """S1/S2, domination of projections, embedding, group laws and extended projection."""
    tol = max(algebra.tol if tol is None else tol, 1e-9)
    rng = np.random.default_rng(seed)
    rep = LawReport()
    eq = lambda a, b: equals0(a, b, tol)  # noqa: E731

    s1 = rep.law("S1.congruence")
    s2 = rep.law("S2.cancellativity")
    dom = rep.law("S.domination-of-projection")
    hom = rep.law("S.embedding-homomorphism")
    inj = rep.law("S.embedding-injective")
    g_assoc = rep.law("G.associativity")
    g_unit = rep.law("G.unit")
    g_inv = rep.law("G.inverse")
    g_idem = rep.law("G.idempotent-product")
    rep_ind = rep.law("P.representative-independence")
    extends = rep.law("P.extends-projection")
    t1 = rep.law("T.extproj-transitivity")
    t2 = rep.law("T.extproj-combination")

    for _ in range(n):
        y = algebra.random_domain(rng)
        psi = algebra.random_valuation(rng, y)
        x = algebra.random_below(rng, y)
        px = psi.project(x)
        s1.record((psi * px).group_tag() == psi.group_tag(), lambda: f"psi = {psi!r}\nx = {x}")
        dom.record(psi.dominates(px), lambda: f"psi = {psi!r}\nx = {x}")

        phi = algebra.random_valuation(rng, algebra.random_domain(rng))
        if not (phi * psi).is_null():
            hom.record(eq(embed(phi) * embed(psi), embed(phi * psi)), lambda: f"phi = {phi!r}\npsi = {psi!r}")
        other = psi if rng.random() < 0.3 else algebra.random_valuation(rng, y)
        inj.record(eq(embed(other), embed(psi)) == psi.equals(other, tol), lambda: f"psi = {psi!r}\nother = {other!r}")

        # S2 within one group: eta . a == eta . b exactly when a == b
        b = psi if rng.random() < 0.3 else psi * algebra.random_valuation(rng, y, positive=True)
        eta = psi * algebra.random_valuation(rng, y, positive=True)
        if eta.group_tag() == psi.group_tag() == b.group_tag():
            s2.record((eta * psi).equals(eta * b, tol) == psi.equals(b, tol),
                      lambda: f"eta = {eta!r}\na = {psi!r}\nb = {b!r}")

        q1, q2, q3 = (_random_quotient(algebra, rng) for _ in range(3))
        g_assoc.record(eq((q1 * q2) * q3, q1 * (q2 * q3)), lambda: f"q1 = {q1!r}\nq2 = {q2!r}\nq3 = {q3!r}")
        g_unit.record(eq(q1 * idempotent_of(q1), q1), lambda: f"q = {q1!r}")
        g_inv.record(eq(q1 * invert(q1), idempotent_of(q1)), lambda: f"q = {q1!r}")
        g_idem.record(
            eq(idempotent_of(q1) * idempotent_of(q2), idempotent_of(q1 * q2)),
            lambda: f"q1 = {q1!r}\nq2 = {q2!r}",
        )

        # two representatives of one class project to equal classes
        q = _random_quotient(algebra, rng)
        chi = algebra.random_valuation(rng, algebra.random_below(rng, q.den_domain))
        if q.num.dominates(chi):
            alt = Quotient(q.nums + (chi,), q.dens + (chi,))
            z = algebra.random_between(rng, q.den_domain, q.domain)
            rep_ind.record(eq(project0(q, z), project0(alt, z)), lambda: f"q = {q!r}\nchi = {chi!r}\nz = {z}")

        z = algebra.random_below(rng, y)
        extends.record(eq(project0(embed(psi), z), embed(psi.project(z))), lambda: f"psi = {psi!r}\nz = {z}")

        # transitivity of extended projection
        q = _random_quotient(algebra, rng)
        yy = algebra.random_between(rng, q.den_domain, q.domain)
        xx = algebra.random_between(rng, q.den_domain, yy)
        t1.record(eq(project0(project0(q, yy), xx), project0(q, xx)), lambda: f"q = {q!r}\nx = {xx}\ny = {yy}")

        # combination with extended projection: pi_x(q1 . q2) = q1 . pi_{x^y}(q2)
        xa, yb = algebra.random_domain(rng), algebra.random_domain(rng)
        qa = _random_quotient(algebra, rng, x=xa)
        qb = _random_quotient(algebra, rng, x=yb, w=algebra.random_below(rng, xa & yb))
        lhs = project0(qa * qb, xa)
        rhs = qa * project0(qb, xa & yb)
        t2.record(eq(lhs, rhs), lambda: f"q1 = {qa!r}\nq2 = {qb!r}\nlhs = {lhs!r}\nrhs = {rhs!r}")
    return rep
