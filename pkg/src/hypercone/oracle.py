"""Representation-free membership tests and identity checks.

Everything here is plain dense linear algebra on the defining polynomial
inequalities; no SDP is solved, so these functions can adjudicate the solver.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import ArgumentError
from .symlin import (as_symmetric, charpoly_coeffs, complement_basis, eigvals_sym, elem_sym,
                     elem_sym_all, schur_complement)

IN = "In"
OUT = "Out"
BOUNDARY = "Boundary"


@dataclass(frozen=True)
class MembershipVerdict:
    """Signed margin, the index ``i`` of the binding ``e_i``, and the decision.

    ``binding_index`` is 0 when no inequality is active (the free space).
    """

    margin: float
    binding_index: int
    decision: str
    tol: float = DEFAULT_TOLERANCES.boundary

    @classmethod
    def from_values(cls, values, tol):
        """Verdict for ``min(values)``; ``values[i]`` is the ``(i+1)``-th inequality."""
        if len(values) == 0:
            return cls(np.inf, 0, IN, tol)
        i = int(np.argmin(values))
        m = float(values[i])
        decision = IN if m > tol else (OUT if m < -tol else BOUNDARY)
        return cls(m, i + 1, decision, tol)

    @property
    def is_in(self):
        return self.decision == IN

    @property
    def is_out(self):
        return self.decision == OUT


def _check_k(n, k):
    if not 0 <= k <= n:
        raise ArgumentError(f"k={k} outside 0..{n}")


def orthant_margin(x, k, tol=DEFAULT_TOLERANCES):
    """``min_{1 <= i <= n-k} e_i(x)``."""
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    _check_k(n, k)
    e = elem_sym_all(x)
    return MembershipVerdict.from_values(e[1:n - k + 1], tol.boundary)


def psd_deriv_margin(X, k, tol=DEFAULT_TOLERANCES):
    """``min_{1 <= i <= n-k} E_i(X)`` from the characteristic polynomial."""
    X = as_symmetric(X, tol)
    n = X.shape[0]
    _check_k(n, k)
    E = charpoly_coeffs(X)
    return MembershipVerdict.from_values(E[:n - k], tol.boundary)


def spectrahedral_margin(pencil, k, x, tol=DEFAULT_TOLERANCES):
    """:func:`psd_deriv_margin` of the normalized pencil image ``sum_i S A_i S x_i``."""
    if not 0 <= k <= pencil.m - 1:
        raise ArgumentError(f"k={k} outside 0..{pencil.m - 1}")
    M = pencil.normalized_matrix(x)
    return psd_deriv_margin(0.5 * (M + M.T), k, tol)


def check_main_identity(x, t=0.0):
    """Relative error of ``e_{n-1}(x + t 1) = n det(V^T diag(x) V + t I)``."""
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    V = complement_basis(n).V
    lhs = elem_sym(x + t, n - 1)
    rhs = n * np.linalg.det(V.T @ np.diag(x) @ V + t * np.eye(n - 1))
    return abs(lhs - rhs) / (1.0 + abs(lhs))


def polar_block_matrix(x):
    """``M(x) = Q^T diag(x) Q`` with ``Q = [V, 1/sqrt(n)]``."""
    x = np.asarray(x, dtype=float).ravel()
    Q = complement_basis(x.size).Q
    M = Q.T @ np.diag(x) @ Q
    return 0.5 * (M + M.T)


def check_polar_identity(x, k, tol=DEFAULT_TOLERANCES):
    """Relative error of ``e_1(x) E_{n-1-k}(M / M_22) = (n-k) e_{n-k}(x)``.

    Raises SingularPivotError when ``e_1(x)`` is numerically zero, since
    ``M_22 = e_1(x) / n``.
    """
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    if not 0 <= k <= n - 1:
        raise ArgumentError(f"k={k} outside 0..{n - 1}")
    S = schur_complement(polar_block_matrix(x), tol)
    E = np.concatenate([[1.0], charpoly_coeffs(S)])
    lhs = elem_sym(x, 1) * E[n - 1 - k]
    rhs = (n - k) * elem_sym(x, n - k)
    scale = 1.0 + max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale


def majorization_check(X, z, tol=1e-9):
    """True iff ``z`` is weakly decreasing and majorizes the eigenvalues of ``X``."""
    lam = eigvals_sym(as_symmetric(X))
    z = np.asarray(z, dtype=float).ravel()
    if z.size != lam.size:
        raise ArgumentError("z and X have different dimensions")
    if np.any(np.diff(z) > tol):
        return False
    if abs(lam.sum() - z.sum()) > tol * (1.0 + abs(z.sum())):
        return False
    return bool(np.all(np.cumsum(lam) <= np.cumsum(z) + tol))


def dual_pairing_min(dual_samples, primal_samples):
    """``min <w, x>`` over all pairs; matrices pair by the trace inner product."""
    W = np.array([np.ravel(w) for w in dual_samples], dtype=float)
    Xs = np.array([np.ravel(x) for x in primal_samples], dtype=float)
    if W.size == 0 or Xs.size == 0:
        raise ArgumentError("sample lists must be nonempty")
    if W.shape[1] != Xs.shape[1]:
        raise ArgumentError("dual and primal samples have different dimensions")
    return float(np.min(W @ Xs.T))


def boundary_point(margin_fn, inside, direction, t_max=1e6, iters=200):
    """Bisect along ``inside + t * direction`` for the last point with margin >= 0.

    ``inside`` must be strictly inside.  Returns None when the ray never leaves
    the set before ``t_max``.
    """
    inside = np.asarray(inside, dtype=float)
    direction = np.asarray(direction, dtype=float)
    hi = 1.0
    while margin_fn(inside + hi * direction) >= 0:
        hi *= 2.0
        if hi > t_max:
            return None
    lo = 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if margin_fn(inside + mid * direction) >= 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    return inside + lo * direction
