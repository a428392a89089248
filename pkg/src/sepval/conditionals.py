"""Conditionals phi_{x|y} = pi_x(phi) / pi_y(phi) and their law suite."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Algebra, Valuation
from .errors import NullValuationError, OrderError
from .laws import LawReport
from .quotient import Quotient, embed, equals0, idempotent_of, multiply, project0, try_reduce


@dataclass(frozen=True, eq=False)
class Conditional:
    """phi_{x|y}, kept together with the valuation and domains it came from."""

    base: Valuation
    upper: object
    lower: object
    body: Quotient

    @property
    def domain(self):
        return self.upper

    def reduce(self):
        """The conditional as a member of the algebra, or None if it is not one."""
        return try_reduce(self.body)

    def __mul__(self, other):
        return multiply(self.body, other.body if isinstance(other, Conditional) else other)


def conditional(phi: Valuation, x, y, marginals: dict | None = None) -> Conditional:
    """phi_{x|y} for y <= x <= d(phi).

    ``marginals`` may hold already computed projections of phi keyed by
    domain; they are reused so that products of conditionals of one phi
    share factors and cancel.
    """
    if not (y <= x and x <= phi.domain):
        raise OrderError(f"need {y} <= {x} <= {phi.domain}")
    marginals = {} if marginals is None else marginals
    px = marginals.setdefault(x, phi.project(x))
    py = marginals.setdefault(y, px.project(y))
    if py.is_null():
        raise NullValuationError(f"the marginal on {y} is null")
    return Conditional(phi, x, y, Quotient((px,), (py,)))


def continue_with(c: Conditional, marginal: Valuation) -> Quotient:
    """c . marginal; reduces to pi_x(phi) when marginal = pi_y(phi)."""
    if marginal.domain != c.lower:
        raise OrderError(f"marginal has domain {marginal.domain}, expected {c.lower}")
    return multiply(c.body, embed(marginal))


def _chain(algebra: Algebra, rng):
    top = algebra.random_domain(rng)
    x = algebra.random_below(rng, top)
    y = algebra.random_below(rng, x)
    z = algebra.random_below(rng, y)
    w = algebra.random_between(rng, z, x)
    return top, x, y, z, w


def check_conditional_laws(algebra: Algebra, n: int = 500, seed: int = 0, tol: float | None = None) -> LawReport:
    """The five conditional identities on random chains z <= y <= x <= d(phi), z <= w <= x."""
    tol = max(algebra.tol if tol is None else tol, 1e-9)
    rng = np.random.default_rng(seed)
    rep = LawReport()
    eq = lambda a, b: equals0(a, b, tol)  # noqa: E731
    l1 = rep.law("C1.projection-is-idempotent")
    l2 = rep.law("C2.chain-rule")
    l3 = rep.law("C3.projection-of-conditional")
    l4 = rep.law("C4.absorbs-lower-factor")
    l5 = rep.law("C5.projection-of-chain")
    dom = rep.law("C.numerator-dominates")
    cont = rep.law("C.continuation")

    for _ in range(n):
        top, x, y, z, w = _chain(algebra, rng)
        phi = algebra.random_valuation(rng, top)
        mg: dict = {}
        c_xy = conditional(phi, x, y, mg)
        c_xz = conditional(phi, x, z, mg)
        c_yz = conditional(phi, y, z, mg)
        c_wz = conditional(phi, w, z, mg)
        px, py = mg[x], mg[y]
        ctx = lambda: f"phi = {phi!r}\nx = {x}\ny = {y}\nz = {z}\nw = {w}"  # noqa: E731

        dom.record(px.dominates(py), ctx)
        cont.record(eq(continue_with(c_xy, py), embed(px)), ctx)
        l1.record(eq(project0(c_xy.body, y), idempotent_of(embed(py))), ctx)
        l2.record(eq(c_xz.body, c_xy * c_yz), ctx)
        l3.record(eq(project0(c_xz.body, y), c_yz.body), ctx)

        psi = algebra.random_valuation(rng, y)
        chi = px * psi
        if not chi.project(y).is_null():
            lhs = conditional(chi, x, y).body
            rhs = multiply(c_xy.body, idempotent_of(embed(psi)))
            l4.record(eq(lhs, rhs), lambda: ctx() + f"\npsi = {psi!r}")

        l5.record(eq(project0(c_xy * c_yz, w), c_wz.body), ctx)
    return rep
