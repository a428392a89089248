"""Gaussian potentials (mu, K): the cancellative instance.

A Gaussian potential on a variable set ``s`` is a mean vector and a
symmetric positive-definite concentration matrix, both indexed by the
sorted scope.  Combination adds zero-padded concentrations; projection
inverts, takes the principal submatrix and inverts back.  Quotients are
handled in canonical form ``(h, K)`` with ``h = K mu``, where ``K`` may be
indefinite; only positive-definite canonical forms map back to members.

The matrix toolkit below is deliberately small: Cholesky, triangular
solves and SPD inversion, for matrices of at most a handful of rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Algebra, GroupTag, Valuation, close
from .errors import NotPositiveDefinite, NotReducible, OrderError
from .lattice import VARIABLES, SubsetLattice, VariableSet, sort_vars

SYM_TOL = 1e-12


# ---------------------------------------------------------------------------
# Matrix toolkit
# ---------------------------------------------------------------------------


def _check_symmetric(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if m.size and np.max(np.abs(m - m.T)) > SYM_TOL * scale:
        raise ValueError("matrix is not symmetric")


def cholesky(m) -> np.ndarray:
    """Lower-triangular L with L L^T = m.  Raises NotPositiveDefinite on a non-positive pivot."""
    a = np.asarray(m, dtype=float)
    _check_symmetric(a)
    n = a.shape[0]
    L = np.zeros_like(a)
    for j in range(n):
        d = a[j, j] - L[j, :j] @ L[j, :j]
        if not d > 0.0:
            raise NotPositiveDefinite(f"non-positive pivot {d:.3g} at row {j}")
        L[j, j] = math.sqrt(d)
        for i in range(j + 1, n):
            L[i, j] = (a[i, j] - L[i, :j] @ L[j, :j]) / L[j, j]
    return L


def _forward(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    y = np.zeros_like(b)
    for i in range(L.shape[0]):
        y[i] = (b[i] - L[i, :i] @ y[:i]) / L[i, i]
    return y


def _backward(L: np.ndarray, y: np.ndarray) -> np.ndarray:
    # solves L^T x = y
    n = L.shape[0]
    x = np.zeros_like(y)
    for i in reversed(range(n)):
        x[i] = (y[i] - L[i + 1:, i] @ x[i + 1:]) / L[i, i]
    return x


def solve(m, b) -> np.ndarray:
    """Solve m x = b for symmetric positive-definite m (b may be a vector or a matrix)."""
    L = cholesky(m)
    b = np.asarray(b, dtype=float)
    return _backward(L, _forward(L, b))


def invert_spd(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    inv = solve(m, np.eye(m.shape[0]))
    return (inv + inv.T) / 2.0


def is_positive_definite(m) -> bool:
    try:
        cholesky(m)
    except NotPositiveDefinite:
        return False
    return True


def condition_number(m) -> float:
    """Ratio of extreme eigenvalues of a symmetric matrix (used only by the generator)."""
    w = np.linalg.eigvalsh(np.asarray(m, dtype=float))
    return float(w[-1] / w[0]) if w.size and w[0] > 0 else math.inf


# ---------------------------------------------------------------------------
# Valuations
# ---------------------------------------------------------------------------


def _pad(scope, sub_scope, vec=None, mat=None):
    idx = [scope.index(v) for v in sub_scope]
    n = len(scope)
    if vec is not None:
        out = np.zeros(n)
        out[idx] = vec
        return out
    out = np.zeros((n, n))
    out[np.ix_(idx, idx)] = mat
    return out


@dataclass(frozen=True, eq=False)
class GaussianPotential(Valuation):
    scope: tuple
    mean: np.ndarray = field(repr=False)
    conc: np.ndarray = field(repr=False)
    lattice: SubsetLattice = VARIABLES

    kind = "gaussian"

    def __post_init__(self):
        scope = tuple(self.scope)
        if tuple(sort_vars(scope)) != scope:
            raise ValueError("scope must be sorted")
        n = len(scope)
        mean = np.asarray(self.mean, dtype=float).reshape(n)
        conc = np.asarray(self.conc, dtype=float).reshape(n, n)
        _check_symmetric(conc)
        cholesky(conc)
        conc = (conc + conc.T) / 2.0
        mean.setflags(write=False)
        conc.setflags(write=False)
        object.__setattr__(self, "scope", scope)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "conc", conc)

    @classmethod
    def from_domain(cls, domain: VariableSet, mean, conc) -> "GaussianPotential":
        return cls(tuple(domain), mean, conc, domain.lattice)

    @property
    def domain(self) -> VariableSet:
        return VariableSet(frozenset(self.scope), self.lattice)

    @property
    def covariance(self) -> np.ndarray:
        return invert_spd(self.conc)

    def __repr__(self):
        return f"GaussianPotential({self.domain}, mean={self.mean.tolist()}, conc={self.conc.tolist()})"

    def combine(self, other: "GaussianPotential") -> "GaussianPotential":
        self._check_peer(other)
        scope = tuple(sort_vars(set(self.scope) | set(other.scope)))
        K1 = _pad(scope, self.scope, mat=self.conc)
        K2 = _pad(scope, other.scope, mat=other.conc)
        K = K1 + K2
        h = K1 @ _pad(scope, self.scope, vec=self.mean) + K2 @ _pad(scope, other.scope, vec=other.mean)
        return type(self)(scope, solve(K, h), K, self.lattice)

    def project(self, x: VariableSet) -> "GaussianPotential":
        self._check_below(x)
        idx = [i for i, v in enumerate(self.scope) if v in x.members]
        if len(idx) == len(self.scope):
            return self
        sigma = self.covariance[np.ix_(idx, idx)]
        return type(self)(tuple(self.scope[i] for i in idx), self.mean[idx], invert_spd(sigma), self.lattice)

    def is_null(self) -> bool:
        return False

    def group_tag(self) -> GroupTag:
        return GroupTag(self.kind, self.domain)

    def dominates(self, other: "GaussianPotential") -> bool:
        return other.domain <= self.domain

    def equals(self, other, tol: float = 1e-8) -> bool:
        return (
            isinstance(other, GaussianPotential)
            and self.scope == other.scope
            and close(self.mean, other.mean, tol)
            and close(self.conc, other.conc, tol)
        )

    def to_canonical(self) -> "CanonicalGaussian":
        return CanonicalGaussian(self.scope, self.conc @ self.mean, self.conc, self.lattice)

    def divide(self, den: "GaussianPotential") -> "GaussianPotential":
        self._check_peer(den)
        if not den.domain <= self.domain:
            raise OrderError(f"denominator domain {den.domain} not below {self.domain}")
        return self.to_canonical().subtract(den.to_canonical()).to_potential()


@dataclass(frozen=True, eq=False)
class CanonicalGaussian:
    """Canonical parameters (h, K) with K symmetric of arbitrary signature."""

    scope: tuple
    h: np.ndarray
    K: np.ndarray
    lattice: SubsetLattice = VARIABLES

    def __post_init__(self):
        n = len(self.scope)
        K = np.asarray(self.K, dtype=float).reshape(n, n)
        _check_symmetric(K)
        object.__setattr__(self, "h", np.asarray(self.h, dtype=float).reshape(n))
        object.__setattr__(self, "K", (K + K.T) / 2.0)

    def _lift(self, scope):
        return _pad(scope, self.scope, vec=self.h), _pad(scope, self.scope, mat=self.K)

    def add(self, other: "CanonicalGaussian") -> "CanonicalGaussian":
        scope = tuple(sort_vars(set(self.scope) | set(other.scope)))
        h1, K1 = self._lift(scope)
        h2, K2 = other._lift(scope)
        return CanonicalGaussian(scope, h1 + h2, K1 + K2, self.lattice)

    def negate(self) -> "CanonicalGaussian":
        return CanonicalGaussian(self.scope, -self.h, -self.K, self.lattice)

    def subtract(self, other: "CanonicalGaussian") -> "CanonicalGaussian":
        return self.add(other.negate())

    def is_member(self) -> bool:
        return is_positive_definite(self.K)

    def to_potential(self) -> GaussianPotential:
        try:
            mean = solve(self.K, self.h)
        except NotPositiveDefinite as exc:
            raise NotReducible(f"canonical concentration is not positive definite ({exc})") from None
        return GaussianPotential(self.scope, mean, self.K, self.lattice)


def to_canonical(g: GaussianPotential) -> CanonicalGaussian:
    return g.to_canonical()


def from_canonical(c: CanonicalGaussian) -> GaussianPotential:
    return c.to_potential()


def combine_gaussian(g1: GaussianPotential, g2: GaussianPotential) -> GaussianPotential:
    return g1.combine(g2)


def project_gaussian(g: GaussianPotential, t: VariableSet) -> GaussianPotential:
    return g.project(t)


def density(g: GaussianPotential, points: np.ndarray) -> np.ndarray:
    """Unnormalized density exp(-(x-mu)^T K (x-mu)/2) at the rows of ``points``."""
    d = np.atleast_2d(points) - g.mean
    return np.exp(-0.5 * np.einsum("ni,ij,nj->n", d, g.conc, d))


class GaussianAlgebra(Algebra):
    name = "gaussian"
    has_units = False
    has_nulls = False
    strong_combination = True
    cancellative = True

    def __init__(self, variables=(1, 2, 3, 4), lattice: SubsetLattice = VARIABLES, tol: float = 1e-8,
                 max_condition: float = 1e3):
        self.variables = tuple(sort_vars(variables))
        self.lattice = lattice
        self.tol = tol
        self.max_condition = max_condition
        self._domains = lattice.elements(self.variables)

    def domains(self) -> list:
        return self._domains

    def random_conc(self, rng, n: int) -> np.ndarray:
        while True:
            A = rng.normal(size=(n + 3, n))
            K = A.T @ A + 1e-6 * np.eye(n)
            if n == 0 or condition_number(K) <= self.max_condition:
                return K

    def random_valuation(self, rng, x, positive: bool = False) -> GaussianPotential:
        n = len(x)
        return GaussianPotential(tuple(x), rng.uniform(-2.0, 2.0, size=n), self.random_conc(rng, n), self.lattice)

    def make(self, x: VariableSet, mean, conc) -> GaussianPotential:
        return GaussianPotential.from_domain(x, mean, conc)
