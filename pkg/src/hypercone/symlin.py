"""Dense symmetric linear algebra and elementary symmetric polynomials.

Sign convention for characteristic-polynomial coefficients: ``E_k(X)`` is the
coefficient of ``t**(n-k)`` in ``det(X + t I)``, so ``E_k(X) = e_k(lambda(X))``
and ``E_n(X) = det(X)``.  Many texts expand ``det(t I - X)`` instead, which
flips the sign of every odd coefficient.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import ArgumentError, DefinitenessError, NumericalError, SingularPivotError


def as_symmetric(X, tol=DEFAULT_TOLERANCES):
    """Return a read-only float copy of ``X`` with the lower triangle mirrored
    from the upper one.

    Raises ArgumentError when ``X`` is not square or is asymmetric beyond
    ``tol.symmetry`` relative to its largest entry.
    """
    X = np.array(X, dtype=float, copy=True)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ArgumentError(f"expected a square matrix, got shape {X.shape}")
    scale = max(1.0, float(np.max(np.abs(X)))) if X.size else 1.0
    if X.size and np.max(np.abs(X - X.T)) > tol.symmetry * scale:
        raise ArgumentError("matrix is not symmetric")
    iu = np.triu_indices(X.shape[0], 1)
    X.T[iu] = X[iu]
    X.setflags(write=False)
    return X


def elem_sym_all(x):
    """All elementary symmetric polynomials ``(e_0, ..., e_n)`` of ``x``.

    Computed as the coefficients of ``prod_i (t + x_i)``, one factor at a time.
    """
    x = np.asarray(x, dtype=float).ravel()
    e = np.zeros(x.size + 1)
    e[0] = 1.0
    for i, xi in enumerate(x):
        e[1:i + 2] = e[1:i + 2] + xi * e[0:i + 1]
    return e


def elem_sym(x, k):
    """Elementary symmetric polynomial ``e_k(x)``; ``e_0 = 1``.

    Uses the O(nk) coefficient recurrence truncated at degree ``k``.
    """
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    if not 0 <= k <= n:
        raise ArgumentError(f"k={k} outside 0..{n}")
    e = np.zeros(k + 1)
    e[0] = 1.0
    for i, xi in enumerate(x):
        top = min(i + 1, k)
        e[1:top + 1] = e[1:top + 1] + xi * e[0:top]
    return float(e[k])


def eigvals_sym(X):
    """Eigenvalues of a symmetric matrix, weakly decreasing.

    LAPACK's tridiagonal reduction followed by implicit QL/QR iteration
    (``dsytrd`` + ``dsterf``); deterministic for a given input.
    """
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        return np.zeros(0)
    try:
        w = np.linalg.eigvalsh(X)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver failed: {exc}") from exc
    return w[::-1].copy()


def charpoly_coeffs(X):
    """``(E_1(X), ..., E_n(X))`` with ``det(X + tI) = t^n + E_1 t^(n-1) + ... + E_n``."""
    lam = eigvals_sym(X)
    return elem_sym_all(lam)[1:]


@dataclass(frozen=True)
class ComplementBasis:
    """Orthonormal basis ``V`` (n x (n-1)) of the complement of the all-ones vector."""

    n: int
    V: np.ndarray

    @property
    def Q(self):
        """The orthogonal matrix ``[V, 1/sqrt(n)]``."""
        return np.column_stack([self.V, np.full(self.n, 1.0 / np.sqrt(self.n))])


def complement_basis(n):
    """Householder-based complement basis.

    The reflector ``H`` mapping ``1/sqrt(n)`` to the first standard basis
    vector is symmetric and orthogonal, its first column is ``1/sqrt(n)``, so
    columns ``2..n`` form ``V``.  The result is a pure function of ``n``.
    """
    if n < 2:
        raise ArgumentError(f"complement basis needs n >= 2, got {n}")
    u = np.full(n, 1.0 / np.sqrt(n))
    w = u.copy()
    w[0] -= 1.0
    H = np.eye(n) - (2.0 / (w @ w)) * np.outer(w, w)
    V = H[:, 1:].copy()
    V.setflags(write=False)
    return ComplementBasis(n, V)


def schur_complement(M, tol=DEFAULT_TOLERANCES):
    """``M11 - M12 M22^{-1} M12^T`` for ``M`` partitioned with a scalar last corner."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise ArgumentError(f"expected a nonempty square matrix, got shape {M.shape}")
    piv = M[-1, -1]
    scale = float(np.max(np.abs(M)))
    if abs(piv) <= tol.pivot * scale or piv == 0.0:
        raise SingularPivotError(f"Schur complement pivot {piv:.3e} is numerically zero")
    b = M[:-1, -1]
    return M[:-1, :-1] - np.outer(b, b) / piv


def inv_sqrt_pd(B, tol=DEFAULT_TOLERANCES):
    """Symmetric inverse square root of a positive definite matrix."""
    B = as_symmetric(B, tol)
    w, U = np.linalg.eigh(B)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size and w[0] <= tol.definiteness * scale:
        raise DefinitenessError(f"matrix is not positive definite (lambda_min={w[0]:.3e})")
    S = (U / np.sqrt(w)) @ U.T
    return 0.5 * (S + S.T)
