"""Structural and probabilistic accuracy bounds for randomized subspace iteration.

Every evaluator takes exact quantities from a reference SVD of ``A`` (the
singular values, the split index ``k`` and the right singular vectors used to
split the starting guess) and returns the bound values. Pairing the bounds
with measured errors happens in :mod:`rsvd_diag.report`.

Notation used in the code: ``sigma`` are the exact singular values,
``gamma_j = sigma_{k+1} / sigma_j`` the singular value ratios, and
``leverage = ||Omega_2 Omega_1^+||_2`` measures how well the starting guess
aligns with the dominant right singular subspace.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import EPS, LinalgError, as_matrix, pseudoinverse, singular_values, svd
from .norms import gauge


class AssumptionError(ValueError):
    """A precondition of the bounds is not met."""


class RankAssumptionError(AssumptionError):
    """``Omega_1 = V_k^T Omega`` does not have full row rank."""


class GapAssumptionError(AssumptionError):
    """No gap at index k (``gamma_k >= 1``) or a derived gap is not positive."""


class DegenerateClusterError(AssumptionError):
    """The separation used in the singular-triplet bound is zero."""


class UnsupportedNormError(ValueError):
    """Bound only holds for Schatten-p norms with ``p >= 2``."""


@dataclass(frozen=True)
class ReferenceSvd:
    """Exact SVD of ``A`` split at index ``k``.

    ``U`` is m x r and ``s`` has length r = min(m, n); ``V`` is a complete
    n x n orthogonal matrix so that ``V_perp`` spans the whole orthogonal
    complement of ``V_k`` even when m < n.
    """

    U: np.ndarray
    s: np.ndarray
    V: np.ndarray
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.s.size:
            raise LinalgError(f"split index k={self.k} outside [1, {self.s.size}]")

    @classmethod
    def from_matrix(cls, A, k):
        """Exact SVD of ``A``.

        Singular values at or below ``max(m, n) * eps * sigma_1`` are set to
        zero: they are rounding noise, and an exactly rank-deficient ``A``
        must give ratios that are exactly zero.
        """
        A = as_matrix(A)
        m, n = A.shape
        f = svd(A, mode="thin" if m >= n else "full")
        r = min(m, n)
        s = f.s.copy()
        s[s <= max(m, n) * EPS * s[0]] = 0.0
        return cls(f.U[:, :r], s, f.V, k)

    def with_k(self, k):
        return ReferenceSvd(self.U, self.s, self.V, k)

    @property
    def shape(self):
        return self.U.shape[0], self.V.shape[0]

    @property
    def U_k(self):
        return self.U[:, : self.k]

    @property
    def V_k(self):
        return self.V[:, : self.k]

    @property
    def V_perp(self):
        return self.V[:, self.k :]

    @property
    def s_k(self):
        return self.s[: self.k]

    @property
    def s_perp(self):
        """Diagonal of ``Sigma_perp`` (the trailing singular values)."""
        return self.s[self.k :]

    @property
    def sigma_k(self):
        return float(self.s[self.k - 1])

    @property
    def sigma_next(self):
        """``sigma_{k+1}``, zero when k equals min(m, n)."""
        return float(self.s[self.k]) if self.k < self.s.size else 0.0

    @property
    def gamma_k(self):
        if self.sigma_k == 0.0:
            raise GapAssumptionError("sigma_k is zero")
        return self.sigma_next / self.sigma_k

    def require_gap(self):
        """Return ``gamma_k``, refusing gaps at the level of rounding error.

        ``sigma_k - sigma_{k+1} <= max(m, n) * eps * sigma_1`` counts as a tie:
        such a split is not resolvable from a floating-point SVD.
        """
        tol = max(self.shape) * EPS * float(self.s[0])
        if not self.sigma_k - self.sigma_next > tol:
            raise GapAssumptionError(
                f"no singular value gap at k={self.k}: "
                f"sigma_k={self.sigma_k:.6g}, sigma_k+1={self.sigma_next:.6g}"
            )
        return self.gamma_k


@dataclass(frozen=True)
class OmegaSplit:
    """``V^T Omega`` split into the dominant block ``omega1`` and the rest."""

    omega1: np.ndarray
    omega2: np.ndarray
    ratio: np.ndarray  # Omega_2 Omega_1^+
    leverage: float
    sigma_min_omega1: float


def split_omega(ref, Omega):
    """Split the starting guess along the reference right singular vectors.

    Raises
    ------
    RankAssumptionError
        If ``Omega_1`` is numerically rank deficient.
    """
    Omega = as_matrix(Omega, "Omega")
    n = ref.V.shape[0]
    if Omega.shape[0] != n:
        raise LinalgError(f"Omega must have {n} rows, got {Omega.shape[0]}")
    k = ref.k
    if Omega.shape[1] < k:
        raise RankAssumptionError(f"Omega has {Omega.shape[1]} < k={k} columns")
    omega1 = ref.V_k.T @ Omega
    omega2 = ref.V_perp.T @ Omega
    sv1 = singular_values(omega1)
    smin = float(sv1[k - 1])
    if not smin > k * sv1[0] * EPS:
        raise RankAssumptionError(f"rank(Omega_1) < k={k} (sigma_min={smin:.3e})")
    ratio = omega2 @ pseudoinverse(omega1, rank_tol=0.0)
    leverage = float(singular_values(ratio)[0]) if ratio.size else 0.0
    return OmegaSplit(omega1, omega2, ratio, leverage, smin)


def weighted_ratio_sv(ref, split):
    """Singular values of ``Sigma_perp Omega_2 Omega_1^+``."""
    s_perp = ref.s_perp
    if s_perp.size == 0 or split.ratio.size == 0:
        return np.zeros(1)
    # rows of Omega_2 beyond min(m, n) - k meet zero rows of Sigma_perp
    W = s_perp[:, None] * split.ratio[: s_perp.size]
    return singular_values(W)


def _norm(sv, spec):
    sv = np.asarray(sv, dtype=np.float64)
    if spec.kind == "kyfan" and spec.k > sv.size:
        sv = np.concatenate([sv, np.zeros(spec.k - sv.size)])
    return gauge(sv, spec)


def singular_ratios(ref):
    """``gamma_j = sigma_{k+1} / sigma_j`` for j = 1..k (nondecreasing)."""
    s_k = ref.s_k
    if s_k[-1] <= 0.0:
        raise GapAssumptionError("sigma_k is zero")
    return ref.sigma_next / s_k


def _sine_from_tangent(t):
    return t / np.hypot(1.0, t)


class AngleBounds(NamedTuple):
    sin_theta: np.ndarray
    sin_nu: np.ndarray
    tan_theta: np.ndarray
    tan_nu: np.ndarray


def angle_bounds(gammas, q, leverage):
    """Per-index bounds on the canonical angles between exact and approximate subspaces.

    The left (``theta``) bound uses ``gamma_j^(2q+1) * leverage`` as the
    tangent bound; the right (``nu``) bound carries one extra power of
    ``gamma_j``.
    """
    gammas = np.asarray(gammas, dtype=np.float64)
    if leverage < 0 or q < 0:
        raise ValueError("leverage and q must be nonnegative")
    tan_theta = gammas ** (2 * q + 1) * leverage
    tan_nu = gammas ** (2 * q + 2) * leverage
    return AngleBounds(_sine_from_tangent(tan_theta), _sine_from_tangent(tan_nu), tan_theta, tan_nu)


def angle_norm_bounds(ref, q, leverage, spec):
    """Bounds on ``|||sin angle(U_k, U_hat)|||`` and ``|||sin angle(V_k, V_hat)|||``.

    Returns ``(u_side, v_side)``.
    """
    if ref.sigma_k <= 0.0:
        raise GapAssumptionError("sigma_k is zero")
    g = ref.gamma_k
    base = _norm(ref.s_perp, spec) / ref.sigma_k * leverage
    return g ** (2 * q) * base, g ** (2 * q + 1) * base


def scaled_angle_check(ref, sin_theta_prime, sin_nu_prime, sigma_hat_next):
    """Slack in the per-index extension of the sin-theta theorem.

    Checks ``max(sin theta'_j, sin nu'_j) <= sigma_k / sigma_j *
    max(sin theta'_k, sin nu'_k)`` and returns ``bound - measured`` per j.

    ``sigma_hat_next`` is the (k+1)-th singular value of the approximation;
    the gap ``sigma_k - sigma_hat_next`` must be positive.
    """
    zeta = ref.sigma_k - sigma_hat_next
    if not zeta > 0:
        raise GapAssumptionError(f"sigma_k(A) - sigma_k+1(A_hat) = {zeta:.3e} is not positive")
    measured = np.maximum(sin_theta_prime, sin_nu_prime)
    bound = ref.sigma_k / ref.s_k * measured[-1]
    return bound - measured


def scaled_angle_bound(ref, sin_theta_prime, sin_nu_prime, sigma_hat_next):
    """Bound values behind :func:`scaled_angle_check` (same preconditions)."""
    measured = np.maximum(sin_theta_prime, sin_nu_prime)
    return measured + scaled_angle_check(ref, sin_theta_prime, sin_nu_prime, sigma_hat_next)


def residual_angle_bound(ref, e12_norm, e21_norm, sigma_hat_next):
    """Per-index bound ``sigma_k / sigma_j * max(||E12||_2, ||E21||_2) / zeta``.

    ``E12 = (I - P_{U_hat_k})(A - A_hat) P_{V_k}`` and
    ``E21 = P_{U_k}(A - A_hat)(I - P_{V_hat_k})`` are the residual blocks of
    the sin-theta theorem and ``zeta = sigma_k(A) - sigma_{k+1}(A_hat)``.
    Unlike :func:`scaled_angle_check` this form does not replace the residual
    ratio by the measured index-k angle, and it is what the argument via
    ``sigma_j(X A_k A_k^+)`` actually delivers.
    """
    zeta = ref.sigma_k - sigma_hat_next
    if not zeta > 0:
        raise GapAssumptionError(f"sigma_k(A) - sigma_k+1(A_hat) = {zeta:.3e} is not positive")
    return ref.sigma_k / ref.s_k * max(e12_norm, e21_norm) / zeta


class ExtractionBounds(NamedTuple):
    norm_bound: float
    per_index: np.ndarray


def extraction_bounds(ref, q, leverage, spec):
    """Bounds on the angles after truncating the approximation to rank k.

    Values may exceed one; they are returned unclamped.
    """
    g = ref.require_gap()
    scale = g ** (2 * q) / (1.0 - g) * leverage
    norm_bound = spec.phi * scale * _norm(ref.s_perp, spec) / ref.sigma_k
    return ExtractionBounds(norm_bound, singular_ratios(ref) * scale)


class SingleVectorBounds(NamedTuple):
    u_subspace: np.ndarray
    v_subspace: np.ndarray
    triplet: np.ndarray
    gamma_tilde: float
    delta_tilde: np.ndarray


def triplet_separation(sigma, sigma_hat):
    """``min(min_{i: sigma_hat_i != sigma_hat_j} |sigma_j - sigma_hat_i|, sigma_j)`` per j."""
    sigma = np.asarray(sigma, dtype=np.float64)
    sigma_hat = np.asarray(sigma_hat, dtype=np.float64)
    out = np.empty(sigma.size)
    for j in range(sigma.size):
        others = sigma_hat[sigma_hat != sigma_hat[j]]
        sep = np.min(np.abs(sigma[j] - others)) if others.size else np.inf
        out[j] = min(sep, sigma[j])
    return out


def single_vector_bounds(ref, q, split, sigma_hat, strict=True):
    """Bounds for individual singular vectors.

    ``u_subspace``/``v_subspace`` bound the angle between an exact singular
    vector and the whole approximate subspace; ``triplet`` bounds the angle
    to the matching approximate singular vector.

    Raises
    ------
    DegenerateClusterError
        If the separation is zero for an index whose bound is not already 0.
        With ``strict=False`` such indices get a NaN triplet bound instead.
    """
    gammas = singular_ratios(ref)
    k = ref.k
    sigma_hat = np.asarray(sigma_hat, dtype=np.float64)
    if sigma_hat.size < k:
        raise ValueError(f"need at least k={k} approximate singular values")
    base = gammas ** (2 * q + 1) * split.leverage
    wsv = weighted_ratio_sv(ref, split)
    gamma_tilde = math.sqrt(ref.sigma_next**2 + float(wsv[0]) ** 2)
    delta = triplet_separation(ref.s_k, sigma_hat)
    triplet = np.zeros(k)
    for j in range(k):
        if base[j] == 0.0:
            continue
        if delta[j] == 0.0:
            if strict:
                raise DegenerateClusterError(f"zero separation at j={j + 1}")
            triplet[j] = np.nan
            continue
        triplet[j] = math.sqrt(1.0 + 2.0 * gamma_tilde**2 / delta[j] ** 2) * base[j]
    return SingleVectorBounds(base, gammas ** (2 * q + 2) * split.leverage, triplet, gamma_tilde, delta)


class LowRankBounds(NamedTuple):
    full: float  # |||(I - QQ^T) A|||
    rank_k: float  # |||(I - QQ^T) A_k|||
    truncated: float  # |||A - Q B_k|||
    schatten: float | None  # Schatten-p (p >= 2) refinement of `full`


def _is_q_norm(spec):
    p = spec.schatten_p
    return p is not None and p >= 2


def lowrank_bounds(ref, q, split, spec):
    """Low-rank approximation error bounds in a unitarily invariant norm.

    ``schatten`` is ``None`` unless ``spec`` is a Schatten norm with p >= 2;
    use :func:`schatten_lowrank_bound` to get an error instead.
    """
    g = ref.require_gap()
    perp = _norm(ref.s_perp, spec)
    weighted = _norm(weighted_ratio_sv(ref, split), spec)
    damp = g ** (2 * q)
    truncated = (1.0 + ref.s[0] / ref.sigma_k * spec.phi * damp / (1.0 - g) * split.leverage) * perp
    schatten = math.hypot(perp, damp * weighted) if _is_q_norm(spec) else None
    return LowRankBounds(perp + damp * weighted, damp * weighted, truncated, schatten)


def schatten_lowrank_bound(ref, q, split, spec):
    """``sqrt(|||Sigma_perp|||^2 + gamma_k^4q |||Sigma_perp Omega_2 Omega_1^+|||^2)``."""
    if not _is_q_norm(spec):
        raise UnsupportedNormError(f"bound needs a Schatten-p norm with p >= 2, got {spec}")
    return lowrank_bounds(ref, q, split, spec).schatten


class SingularValueBounds(NamedTuple):
    upper: np.ndarray
    lower: np.ndarray


def singular_value_bounds(ref, q, leverage):
    """Two-sided bounds on the leading k approximate singular values."""
    gammas = singular_ratios(ref)
    s_k = ref.s_k
    t = gammas ** (2 * q + 1) * leverage
    return SingularValueBounds(s_k.copy(), s_k / np.hypot(1.0, t))


def hoffman_wielandt_bounds(ref, q, split, spec):
    """Bounds on ``|||Sigma - Sigma'|||`` (exact vs. zero-padded approximate singular values).

    Returns ``(uin_bound, schatten_bound)``; the second is ``None`` for norms
    other than Schatten p >= 2.
    """
    if ref.sigma_k <= 0.0:
        raise GapAssumptionError("sigma_k is zero")
    g = ref.gamma_k
    perp = _norm(ref.s_perp, spec)
    weighted = _norm(weighted_ratio_sv(ref, split), spec)
    uin = perp + g ** (2 * q) * weighted
    schatten = math.hypot(perp, g ** (2 * q) * weighted) if _is_q_norm(spec) else None
    return uin, schatten


def singular_value_error(sigma, sigma_hat):
    """Singular values of ``Sigma - Sigma'`` with ``sigma_hat`` zero-padded."""
    sigma = np.asarray(sigma, dtype=np.float64)
    padded = np.zeros_like(sigma)
    ell = min(len(sigma_hat), sigma.size)
    padded[:ell] = sigma_hat[:ell]
    return np.sort(np.abs(sigma - padded))[::-1]


class GaussianConstants(NamedTuple):
    expectation: float
    tail: float | None


def gaussian_constants(n, k, rho, delta=None):
    """Constants bounding ``||Omega_2 Omega_1^+||_2`` for a standard Gaussian guess.

    ``expectation`` bounds the mean; ``tail`` holds with probability at least
    ``1 - delta`` (``None`` when ``delta`` is not given).
    """
    if rho < 2:
        raise ValueError(f"oversampling rho must be >= 2, got {rho}")
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    ce = math.sqrt(k / (rho - 1)) + math.e * math.sqrt((k + rho) * (n - k)) / rho
    if delta is None:
        return GaussianConstants(ce, None)
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    cd = (
        math.e
        * math.sqrt(k + rho)
        / (rho + 1)
        * (2.0 / delta) ** (1.0 / (rho + 1))
        * (math.sqrt(n - k) + math.sqrt(k + rho) + math.sqrt(2.0 * math.log(2.0 / delta)))
    )
    return GaussianConstants(ce, cd)


class ProbabilisticAngleBounds(NamedTuple):
    expect_theta: np.ndarray
    expect_nu: np.ndarray
    tail_theta: np.ndarray
    tail_nu: np.ndarray


def probabilistic_angle_bounds(gammas, q, n, k, rho, delta):
    """Expectation and tail bounds on the canonical angles for a Gaussian guess.

    The tail bounds use ``gamma_j`` throughout.
    """
    gammas = np.asarray(gammas, dtype=np.float64)
    if not gammas[-1] < 1:
        raise GapAssumptionError(f"gamma_k={gammas[-1]:.6g} must be < 1")
    ce, cd = gaussian_constants(n, k, rho, delta)
    e = angle_bounds(gammas, q, ce)
    t = angle_bounds(gammas, q, cd)
    return ProbabilisticAngleBounds(e.sin_theta, e.sin_nu, t.sin_theta, t.sin_nu)


def required_iterations(epsilon, c_e, gamma_k):
    """Smallest q >= 0 with ``gamma_k^(2q+1) * c_e <= epsilon``."""
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not c_e > 0:
        raise ValueError("c_e must be positive")
    if not 0 < gamma_k < 1:
        raise GapAssumptionError(f"gamma_k must lie in (0, 1), got {gamma_k}")
    x = 0.5 * (math.log(epsilon / c_e) / math.log(gamma_k) - 1.0)
    q = max(0, math.ceil(x))

    def ok(qq):
        return gamma_k ** (2 * qq + 1) * c_e <= epsilon

    # guard the ceiling against rounding in the logarithms
    while not ok(q):
        q += 1
    while q > 0 and ok(q - 1):
        q -= 1
    return q


__all__ = [
    "AssumptionError",
    "DegenerateClusterError",
    "GapAssumptionError",
    "OmegaSplit",
    "RankAssumptionError",
    "ReferenceSvd",
    "UnsupportedNormError",
    "angle_bounds",
    "angle_norm_bounds",
    "extraction_bounds",
    "gaussian_constants",
    "scaled_angle_check",
    "residual_angle_bound",
    "hoffman_wielandt_bounds",
    "lowrank_bounds",
    "probabilistic_angle_bounds",
    "required_iterations",
    "single_vector_bounds",
    "singular_ratios",
    "singular_value_bounds",
    "split_omega",
]
