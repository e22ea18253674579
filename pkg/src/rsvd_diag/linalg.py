"""Dense linear-algebra kernel: QR, SVD, pseudoinverse and rank-k truncation.

All routines work on real double-precision ``numpy`` arrays. Factorizations
are delegated to LAPACK (through numpy/scipy); this module adds the input
validation, sign conventions and error reporting the rest of the package
relies on.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

EPS = np.finfo(np.float64).eps


class LinalgError(ValueError):
    """Invalid input to a kernel routine."""


class SvdConvergenceError(RuntimeError):
    """Raised when LAPACK fails to converge on an SVD."""


def as_matrix(A, name="A"):
    """Validate ``A`` as a finite, non-empty 2-D float64 array."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise LinalgError(f"{name} must be 2-D, got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise LinalgError(f"{name} must be non-empty, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise LinalgError(f"{name} has non-finite entries")
    return A


@dataclass(frozen=True)
class SvdFactors:
    """SVD ``A = U diag(s) V^T`` with ``s`` in descending order.

    In thin mode ``U`` is m x r and ``V`` is n x r with r = min(m, n). In full
    mode ``U`` and ``V`` are square and only their first r columns pair with
    ``s``.
    """

    U: np.ndarray
    s: np.ndarray
    V: np.ndarray

    @property
    def rank_cap(self):
        return self.s.shape[0]

    def reconstruct(self):
        r = self.rank_cap
        return (self.U[:, :r] * self.s) @ self.V[:, :r].T


def thin_qr(A):
    """Thin Householder QR with the diagonal of ``R`` made nonnegative.

    Returns ``Q`` (m x n, orthonormal columns) and upper-triangular ``R``
    (n x n) with ``Q @ R == A``.
    """
    A = as_matrix(A)
    m, n = A.shape
    if m < n:
        raise LinalgError(f"thin_qr needs rows >= cols, got {m} x {n}")
    Q, R = np.linalg.qr(A, mode="reduced")
    signs = np.where(np.diag(R) < 0, -1.0, 1.0)
    return Q * signs, R * signs[:, None]


def _fix_signs(U, V, r):
    # Largest-magnitude entry of each left singular vector is made nonnegative.
    idx = np.argmax(np.abs(U), axis=0)
    signs = np.where(U[idx, np.arange(U.shape[1])] < 0, -1.0, 1.0)
    U = U * signs
    V = V.copy()
    V[:, :r] *= signs[:r]
    return U, V


def svd(A, mode="thin"):
    """Singular value decomposition with a deterministic sign convention.

    Parameters
    ----------
    A : array_like, (m, n)
    mode : {"thin", "full"}
        ``"full"`` returns square orthogonal ``U`` and ``V``.

    Raises
    ------
    SvdConvergenceError
        If both the divide-and-conquer and the QR-iteration drivers fail.
    """
    A = as_matrix(A)
    if mode not in ("thin", "full"):
        raise LinalgError(f"unknown svd mode {mode!r}")
    full = mode == "full"
    try:
        U, s, Vt = scipy.linalg.svd(A, full_matrices=full, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        try:
            U, s, Vt = scipy.linalg.svd(A, full_matrices=full, lapack_driver="gesvd")
        except np.linalg.LinAlgError as exc:
            raise SvdConvergenceError(f"SVD of {A.shape} matrix did not converge") from exc
    U, V = _fix_signs(U, Vt.T, s.shape[0])
    return SvdFactors(U, s, V)


def singular_values(A):
    """Singular values of ``A`` in descending order."""
    A = as_matrix(A)
    try:
        return scipy.linalg.svd(A, compute_uv=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        try:
            return scipy.linalg.svd(A, compute_uv=False, lapack_driver="gesvd")
        except np.linalg.LinAlgError as exc:
            raise SvdConvergenceError(f"SVD of {A.shape} matrix did not converge") from exc


def pseudoinverse(A, rank_tol=None):
    """Moore-Penrose inverse via the SVD.

    Singular values below ``rank_tol * sigma_1`` are treated as zero. The
    default ``rank_tol`` is ``max(m, n) * eps``.
    """
    A = as_matrix(A)
    m, n = A.shape
    if rank_tol is None:
        rank_tol = max(m, n) * EPS
    if rank_tol < 0:
        raise LinalgError("rank_tol must be nonnegative")
    f = svd(A, mode="thin")
    s = f.s
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((n, m))
    keep = s > rank_tol * s[0]
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (f.V[:, : s.size] * inv) @ f.U[:, : s.size].T


def best_rank_k(f, k):
    """Leading-k slice ``(U_k, s_k, V_k)`` of an SVD (Eckart-Young optimum)."""
    r = f.rank_cap
    if not 1 <= k <= r:
        raise LinalgError(f"k must lie in [1, {r}], got {k}")
    return f.U[:, :k], f.s[:k], f.V[:, :k]


def orthonormality_error(Q):
    """``max |Q^T Q - I|``."""
    Q = np.asarray(Q)
    return float(np.max(np.abs(Q.T @ Q - np.eye(Q.shape[1])))) if Q.size else 0.0
