"""Canonical angles between subspaces and between vectors and subspaces."""
from dataclasses import dataclass

import numpy as np

from .linalg import singular_values
from .norms import gauge

ORTHO_TOL = 1e-10
UNIT_TOL = 1e-10


class AngleError(ValueError):
    pass


@dataclass(frozen=True)
class AngleSet:
    """Sines and cosines of the canonical angles, ordered by increasing angle."""

    sines: np.ndarray
    cosines: np.ndarray
    dims: tuple

    @property
    def angles(self):
        return np.arctan2(self.sines, self.cosines)

    @property
    def tangents(self):
        with np.errstate(divide="ignore"):
            return self.sines / self.cosines


def _check_orthonormal(M, name):
    M = np.asarray(M, dtype=np.float64)
    if M.ndim == 1:
        M = M[:, None]
    err = np.max(np.abs(M.T @ M - np.eye(M.shape[1])))
    if err > ORTHO_TOL:
        raise AngleError(f"{name} is not orthonormal (max deviation {err:.2e})")
    return M


def canonical_angles(M, N):
    """Canonical angles between ``range(M)`` and ``range(N)``.

    ``M`` (n x l) and ``N`` (n x k) must have orthonormal columns and
    ``l >= k``. Sines come from ``(I - M M^T) N``, cosines from ``M^T N``.
    """
    M = _check_orthonormal(M, "M")
    N = _check_orthonormal(N, "N")
    if M.shape[0] != N.shape[0]:
        raise AngleError(f"row mismatch: {M.shape[0]} vs {N.shape[0]}")
    if M.shape[1] < N.shape[1]:
        raise AngleError(f"dim M ({M.shape[1]}) must be >= dim N ({N.shape[1]})")
    k = N.shape[1]
    residual = N - M @ (M.T @ N)
    sines = np.clip(np.sort(singular_values(residual))[:k], 0.0, 1.0)
    cosines = np.clip(singular_values(M.T @ N)[:k], 0.0, 1.0)
    return AngleSet(sines, cosines, (M.shape[1], k))


def sin_angle_norm(M, N, spec):
    """Unitarily invariant norm of ``sin angle(M, N)``."""
    return gauge(canonical_angles(M, N).sines, spec)


def vector_subspace_angle(x, M):
    """Sine of the angle between unit vector ``x`` and ``range(M)``."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if abs(np.linalg.norm(x) - 1.0) > UNIT_TOL:
        raise AngleError("x must have unit norm")
    M = _check_orthonormal(M, "M")
    return float(min(np.linalg.norm(x - M @ (M.T @ x)), 1.0))


def vector_vector_angle(x, y):
    """Sine of the angle between the lines spanned by unit vectors ``x``, ``y``.

    Equals ``sqrt(1 - (x^T y)^2)`` but is evaluated as the norm of the
    projection residual, which keeps small angles accurate.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    for v, name in ((x, "x"), (y, "y")):
        if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
            raise AngleError(f"{name} must have unit norm")
    return float(min(np.linalg.norm(y - (x @ y) * x), 1.0))
