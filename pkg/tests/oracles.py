"""Independent reference computations used to freeze expected values.

Nothing here calls the library's transforms or table code: belief
combinations are enumerated over explicit sets, commonalities are plain
superset sums, and Gaussian operations are checked against numerical
integration of exp(-(x-mu)^T K (x-mu)/2) on a grid.
"""

import itertools

import numpy as np

GRID = np.arange(-8.0, 8.0 + 1e-9, 0.01)


# ---------------------------------------------------------------------------
# Belief functions
# ---------------------------------------------------------------------------


def atoms_of(m):
    """The frame's atoms as explicit sets of fine points."""
    sys_ = m.system
    if sys_.multivariate:
        scope = tuple(m.frame)
        return [frozenset({(scope, cfg)}) for cfg in itertools.product(*(range(sys_.cards[v]) for v in scope))]
    return [frozenset(b) for b in m.frame.blocks]


def lift_points(m, mask, joint_scope=None, cards=None):
    """The focal set ``mask`` of m as a set of points of the finest common space."""
    sys_ = m.system
    if sys_.multivariate:
        scope = tuple(m.frame)
        cfgs = list(itertools.product(*(range(sys_.cards[v]) for v in scope)))
        chosen = {cfgs[i] for i in range(len(cfgs)) if mask >> i & 1}
        out = set()
        for full in itertools.product(*(range(cards[v]) for v in joint_scope)):
            at = dict(zip(joint_scope, full))
            if tuple(at[v] for v in scope) in chosen:
                out.add(full)
        return frozenset(out)
    pts = set()
    for i, b in enumerate(m.frame.blocks):
        if mask >> i & 1:
            pts |= b
    return frozenset(pts)


def combine_brute(m1, m2):
    """Dempster combination without normalization, by explicit set intersection.

    Returns {frozenset of points: mass} over the finest common space.
    """
    sys_ = m1.system
    joint = tuple(sorted(set(m1.frame) | set(m2.frame), key=str)) if sys_.multivariate else None
    out = {}
    for a, x in m1.focal().items():
        la = lift_points(m1, a, joint, sys_.cards)
        for b, y in m2.focal().items():
            c = la & lift_points(m2, b, joint, sys_.cards)
            out[c] = out.get(c, 0.0) + x * y
    return out


def as_point_sets(m, joint=None):
    """m's focal sets as point sets, comparable with combine_brute output."""
    sys_ = m.system
    if sys_.multivariate and joint is None:
        joint = tuple(sorted(m.frame, key=str))
    out = {}
    for a, x in m.focal().items():
        s = lift_points(m, a, joint, sys_.cards)
        out[s] = out.get(s, 0.0) + x
    return out


def commonality_brute(masses):
    n = len(masses)
    return np.array([sum(masses[t] for t in range(n) if t & s == s) for s in range(n)])


def moebius_brute(q):
    n = len(q)
    out = np.zeros(n)
    for s in range(n):
        for t in range(n):
            if t & s == s:
                out[s] += (-1) ** bin(t & ~s).count("1") * q[t]
    return out


# ---------------------------------------------------------------------------
# Gaussians
# ---------------------------------------------------------------------------


def _density(mean, conc, pts):
    d = pts - mean
    return np.exp(-0.5 * np.einsum("...i,ij,...j->...", d, conc, d))


def grid_moments_1d(weights):
    w = weights / weights.sum()
    mu = float((GRID * w).sum())
    var = float(((GRID - mu) ** 2 * w).sum())
    return mu, var


def grid_moments_2d(weights):
    X, Y = np.meshgrid(GRID, GRID, indexing="ij")
    w = weights / weights.sum()
    mu = np.array([(X * w).sum(), (Y * w).sum()])
    dx, dy = X - mu[0], Y - mu[1]
    cov = np.array([[(dx * dx * w).sum(), (dx * dy * w).sum()], [(dx * dy * w).sum(), (dy * dy * w).sum()]])
    return mu, cov


def grid_density_1d(mean, conc):
    return _density(np.atleast_1d(mean), np.atleast_2d(conc), GRID[:, None])


def grid_density_2d(mean, conc):
    X, Y = np.meshgrid(GRID, GRID, indexing="ij")
    return _density(np.asarray(mean), np.asarray(conc), np.stack([X, Y], axis=-1))
