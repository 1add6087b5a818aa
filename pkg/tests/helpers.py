"""Shared point generators for the representation tests."""

import numpy as np

from hypercone.lmi import svec
from hypercone.oracle import orthant_margin, psd_deriv_margin


def random_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def shifted_vector(rng, n):
    """Gaussian vector shifted along ``1``; lands on both sides of every relaxation."""
    return rng.uniform(0.0, 2.0) + rng.standard_normal(n)


def decided_orthant_points(rng, n, k, count, gap=1e-6):
    """``count`` points with ``|orthant margin| >= gap`` and their oracle signs."""
    out = []
    while len(out) < count:
        x = shifted_vector(rng, n)
        m = orthant_margin(x, k).margin
        if abs(m) >= gap:
            out.append((x, m > 0))
    return out


def decided_psd_points(rng, n, k, count, gap=1e-6):
    """Rotated diagonal matrices as svec vectors, with oracle signs."""
    out = []
    while len(out) < count:
        Q = random_orthogonal(rng, n)
        X = Q @ np.diag(shifted_vector(rng, n)) @ Q.T
        X = 0.5 * (X + X.T)
        m = psd_deriv_margin(X, k).margin
        if abs(m) >= gap:
            out.append((svec(X), m > 0))
    return out


def oracle_orthant_members(rng, n, k, count):
    """Unit-norm members of orthant(n,k) found without any solver: half of them
    interior points by rejection, half boundary points by bisection from ``1``.
    The full space (k = n) has no boundary and the half-line (n = 1) meets its
    boundary only at 0, so there all points are random."""
    from hypercone.oracle import boundary_point
    out = []
    while len(out) < (count if k == n or n == 1 else count // 2):
        x = shifted_vector(rng, n)
        if orthant_margin(x, k).margin >= 0:
            out.append(x / np.linalg.norm(x))
    fn = lambda x: orthant_margin(x, k).margin
    while len(out) < count:
        b = boundary_point(fn, np.ones(n), rng.standard_normal(n))
        if b is not None and fn(b) >= 0 and np.linalg.norm(b) > 1e-9:
            out.append(b / np.linalg.norm(b))
    return np.array(out)


def oracle_psd_members(rng, n, k, count):
    """Members of psd_deriv(n,k) as full matrices: rotated orthant members."""
    mats = []
    for x in oracle_orthant_members(rng, n, k, count):
        Q = random_orthogonal(rng, n)
        X = Q @ np.diag(x) @ Q.T
        mats.append(0.5 * (X + X.T))
    return mats


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []
