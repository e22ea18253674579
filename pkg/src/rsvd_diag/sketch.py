"""Randomized subspace iteration and rank-k truncation of the sketch."""
from dataclasses import dataclass

import numpy as np

from .linalg import EPS, LinalgError, as_matrix, svd, thin_qr

VARIANTS = ("practical", "idealized")
PRNG_NAME = "Philox4x64-10"
PRNG_VERSION = f"numpy-{np.__version__}/{PRNG_NAME}"


class RankDeficientSketchError(LinalgError):
    """The sketch has numerical rank below the number of sampled columns."""

    def __init__(self, numerical_rank, ell):
        self.numerical_rank = numerical_rank
        self.ell = ell
        super().__init__(f"sketch has numerical rank {numerical_rank} < {ell}")


@dataclass(frozen=True)
class SketchConfig:
    k: int
    rho: int = 20
    q: int = 0
    seed: int = 0
    variant: str = "practical"

    def __post_init__(self):
        if self.k < 1 or self.rho < 0 or self.q < 0:
            raise ValueError(f"invalid sketch parameters k={self.k} rho={self.rho} q={self.q}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")

    @property
    def ell(self):
        return self.k + self.rho


@dataclass(frozen=True)
class ApproxSvd:
    """``U_hat diag(sigma_hat) V_hat^T == Q Q^T A`` with ``Q`` the sketch basis."""

    U_hat: np.ndarray
    sigma_hat: np.ndarray
    V_hat: np.ndarray
    Q: np.ndarray


def rng(seed):
    """Seeded counter-based generator used for every random draw in the package."""
    return np.random.Generator(np.random.Philox(int(seed)))


def gaussian_guess(n, ell, seed):
    """``n x ell`` matrix of i.i.d. standard normals; bit-identical per seed."""
    if not n >= ell >= 1:
        raise ValueError(f"need n >= ell >= 1, got n={n}, ell={ell}")
    return rng(seed).standard_normal((n, ell))


def _orthonormalize(Y):
    Q, R = thin_qr(Y)
    d = np.abs(np.diag(R))
    # ||R||_2 == ||Y||_2
    tol = Y.shape[1] * np.linalg.norm(R, 2) * EPS
    deficient = d <= tol
    if np.any(deficient):
        raise RankDeficientSketchError(int(np.sum(~deficient)), Y.shape[1])
    return Q


def range_finder(A, Omega, q, variant="practical"):
    """Orthonormal basis ``Q`` for the range of ``(A A^T)^q A Omega``.

    ``"idealized"`` forms the sketch explicitly and factors it once.
    ``"practical"`` re-orthonormalizes after every product with ``A`` or
    ``A^T`` (2q + 1 QR factorizations in total).

    Raises
    ------
    RankDeficientSketchError
        If a factored block has numerical rank below ``ell``.
    """
    A = as_matrix(A)
    Omega = as_matrix(Omega, "Omega")
    m, n = A.shape
    if Omega.shape[0] != n:
        raise LinalgError(f"Omega must have {n} rows, got {Omega.shape[0]}")
    ell = Omega.shape[1]
    if ell > min(m, n):
        raise LinalgError(f"ell={ell} exceeds min(m, n)={min(m, n)}")
    if q < 0:
        raise LinalgError("q must be nonnegative")
    if variant == "idealized":
        Y = A @ Omega
        for _ in range(q):
            Y = A @ (A.T @ Y)
        return _orthonormalize(Y)
    if variant != "practical":
        raise LinalgError(f"unknown variant {variant!r}")
    Q = _orthonormalize(A @ Omega)
    for _ in range(q):
        W = _orthonormalize(A.T @ Q)
        Q = _orthonormalize(A @ W)
    return Q


def rand_svd(A, Omega, q, variant="practical"):
    """Approximate SVD of ``A`` from the sketch basis (``Q^T A = U_B S V^T``)."""
    A = as_matrix(A)
    Q = range_finder(A, Omega, q, variant)
    f = svd(Q.T @ A, mode="thin")
    return ApproxSvd(Q @ f.U, f.s, f.V, Q)


def truncate(A, Q, k):
    """Rank-k truncation of ``Q Q^T A``: returns ``(U_hat_k, sigma_hat_k, V_hat_k)``."""
    A = as_matrix(A)
    ell = Q.shape[1]
    if not 1 <= k <= ell:
        raise LinalgError(f"k must lie in [1, {ell}], got {k}")
    f = svd(Q.T @ A, mode="thin")
    return Q @ f.U[:, :k], f.s[:k].copy(), f.V[:, :k]
