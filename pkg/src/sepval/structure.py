"""Where each instance sits among regular, cancellative and merely separative algebras."""

from __future__ import annotations

import numpy as np

from .belief import FrameSystem, regularity_witness
from .core import Algebra, close
from .errors import NotReducible
from .laws import LawReport
from .quotient import Quotient, reduce


def regularity_certificate(phi, x):
    """chi with phi = phi . pi_x(phi) . chi, taken as the reduced inverse of pi_x(phi)."""
    px = phi.project(x)
    chi = reduce(Quotient((px,), (px, px)))
    return chi, phi.combine(px).combine(chi)


def check_regularity(algebra: Algebra, n: int = 500, seed: int = 0, tol: float | None = None) -> LawReport:
    """Every phi and x <= d(phi) admit an element chi with phi = phi . pi_x(phi) . chi."""
    tol = algebra.tol if tol is None else tol
    rng = np.random.default_rng(seed)
    rep = LawReport()
    law = rep.law("R.regularity")
    for _ in range(n):
        top = algebra.random_domain(rng)
        x = algebra.random_below(rng, top)
        phi = algebra.random_valuation(rng, top)
        try:
            chi, back = regularity_certificate(phi, x)
            ok = back.equals(phi, tol)
        except NotReducible:
            ok = False
        law.record(ok, lambda: f"phi = {phi!r}\nx = {x}")
    return rep


def check_cancellativity(algebra: Algebra, n: int = 200, seed: int = 0, tol: float | None = None) -> LawReport:
    """phi . psi = phi . psi' implies psi = psi', on Gaussian triples.

    Cancellation is carried out on canonical parameters: (h, K) of phi is
    subtracted from that of phi . psi and the remainder must be the padded
    (h, K) of psi.  An independent psi' != psi must give a different product.
    """
    tol = algebra.tol if tol is None else tol
    rng = np.random.default_rng(seed)
    rep = LawReport()
    recover = rep.law("X.cancel-recovers")
    separate = rep.law("X.cancel-separates")
    for _ in range(n):
        top = algebra.random_domain(rng)
        y = algebra.random_below(rng, top)
        phi = algebra.random_valuation(rng, top)
        psi = algebra.random_valuation(rng, y)
        other = algebra.random_valuation(rng, y)
        ctx = lambda: f"phi = {phi!r}\npsi = {psi!r}\npsi' = {other!r}"  # noqa: E731
        prod = phi.combine(psi)
        rest = prod.to_canonical().subtract(phi.to_canonical())
        h, K = psi.to_canonical()._lift(rest.scope)
        recover.record(close(rest.h, h, tol) and close(rest.K, K, tol), ctx)
        if len(y):
            separate.record(not phi.combine(other).equals(prod, tol), ctx)
    return rep


def belief_witness_report(system: FrameSystem | None = None) -> tuple[LawReport, str]:
    """The stored non-reducible belief quotient: 1/q of a simple support function.

    The law holds when reduce rejects the quotient and some Möbius
    coefficient of the inverse commonality is negative.
    """
    m, signed = regularity_witness(system)
    rep = LawReport()
    law = rep.law("W.belief-not-regular")
    embedded = Quotient((m,), (m, m))
    try:
        reduce(embedded)
        rejected = False
    except NotReducible:
        rejected = True
    neg = [(i, float(v)) for i, v in enumerate(signed) if v < 0]
    law.record(rejected and bool(neg), lambda: f"m = {m!r}")
    n = m.natoms
    labels = m.system.atom_labels(m.frame)

    def atom(lab):
        return "".join(str(a) for a in lab)

    def name(mask):
        return "{" + ",".join(atom(labels[i]) for i in range(n) if mask >> i & 1) + "}"

    lines = [
        f"witness: m on frame {m.frame} with " + ", ".join(f"m({name(k)})={v:g}" for k, v in m.focal().items()),
        "quotient: [m, m.m] (the group inverse of m)",
        "moebius coefficients of 1/q_m: " + ", ".join(f"{name(i)}:{v:g}" for i, v in enumerate(signed)),
    ]
    lines += [f"negative coefficient: {name(i)} -> {v:g}" for i, v in neg]
    lines.append("reduce: " + ("rejected (NotReducible)" if rejected else "accepted"))
    return rep, "\n".join(lines)


__all__ = [
    "regularity_certificate",
    "check_regularity",
    "check_cancellativity",
    "belief_witness_report",
]
