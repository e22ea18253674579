"""Seeded generators for the three synthetic test-matrix families.

* ``controlled_gap``: sum of sparse nonnegative rank-one terms with a
  tunable jump after the first ``r`` terms.
* ``low_rank_plus_noise``: identity block of rank ``r`` plus symmetric
  Gaussian noise.
* ``low_rank_plus_decay``: random orthogonal factors around a flat-then-
  polynomially-decaying spectrum.
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from .linalg import thin_qr
from .sketch import rng

FAMILIES = ("controlled_gap", "low_rank_plus_noise", "low_rank_plus_decay")
DEFAULT_SEED = 2019


@dataclass(frozen=True)
class TestMatrixSpec:
    """Parameters of one generated matrix.

    ``param`` is ``gap`` for ``controlled_gap``, the noise level for
    ``low_rank_plus_noise`` and the decay exponent ``d`` for
    ``low_rank_plus_decay``. ``m`` only applies to ``controlled_gap``.
    """

    __test__ = False  # not a pytest class

    family: str
    param: float
    n: int = 300
    r: int = 15
    seed: int = DEFAULT_SEED
    m: int = 3000
    name: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.r < 1 or not self.param > 0:
            raise ValueError("r must be >= 1 and param > 0")
        if self.r > self.n:
            raise ValueError(f"r={self.r} exceeds n={self.n}")

    @property
    def label(self):
        return self.name or f"{self.family}-{self.param:g}"

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    def generate(self):
        if self.family == "controlled_gap":
            return controlled_gap(self.param, self.seed, m=self.m, n=self.n, r=self.r)
        if self.family == "low_rank_plus_noise":
            return low_rank_plus_noise(self.n, self.r, self.param, self.seed)
        return low_rank_plus_decay(self.n, self.r, self.param, self.seed)


def sprand_vector(gen, length, density):
    """Sparse vector: ``ceil(density * length)`` uniform(0, 1) entries at random positions."""
    nnz = min(length, math.ceil(density * length))
    v = np.zeros(length)
    v[gen.choice(length, size=nnz, replace=False)] = gen.random(nnz)
    return v


def controlled_gap(gap, seed, m=3000, n=300, r=15, density=0.025):
    """``sum_j c_j x_j y_j^T`` with ``c_j = gap/j`` for j <= r and ``1/j`` after.

    ``x_j`` and ``y_j`` are sparse with nonnegative entries, so the result is
    entrywise nonnegative.
    """
    if not gap > 0:
        raise ValueError("gap must be positive")
    gen = rng(seed)
    X = np.empty((m, n))
    Y = np.empty((n, n))
    for j in range(n):
        X[:, j] = sprand_vector(gen, m, density)
        Y[:, j] = sprand_vector(gen, n, density)
    idx = np.arange(1, n + 1, dtype=np.float64)
    coef = np.where(idx <= r, gap / idx, 1.0 / idx)
    return (X * coef) @ Y.T


def low_rank_plus_noise(n, r, gamma_n, seed):
    """``diag(I_r, 0) + sqrt(gamma_n r / (2 n^2)) (G + G^T)`` with Gaussian ``G``."""
    if not gamma_n > 0:
        raise ValueError("gamma_n must be positive")
    if r > n:
        raise ValueError(f"r={r} exceeds n={n}")
    G = rng(seed).standard_normal((n, n))
    A = math.sqrt(gamma_n * r / (2.0 * n * n)) * (G + G.T)
    A[np.arange(r), np.arange(r)] += 1.0
    return A


def decay_spectrum(n, r, d):
    """``(1, ..., 1, 2^-d, 3^-d, ..., (n - r + 1)^-d)`` with ``r`` leading ones."""
    tail = np.arange(2, n - r + 2, dtype=np.float64) ** (-d)
    return np.concatenate([np.ones(r), tail])


def low_rank_plus_decay(n, r, d, seed):
    """``U diag(decay_spectrum) V^T`` with ``U``, ``V`` from QR of Gaussian draws."""
    if not d > 0:
        raise ValueError("d must be positive")
    if r > n:
        raise ValueError(f"r={r} exceeds n={n}")
    gen = rng(seed)
    U, _ = thin_qr(gen.standard_normal((n, n)))
    V, _ = thin_qr(gen.standard_normal((n, n)))
    return (U * decay_spectrum(n, r, d)) @ V.T


NAMED_MATRICES = {
    "GapSmall": TestMatrixSpec("controlled_gap", 1.0, name="GapSmall"),
    "GapMedium": TestMatrixSpec("controlled_gap", 2.0, name="GapMedium"),
    "GapLarge": TestMatrixSpec("controlled_gap", 10.0, name="GapLarge"),
    "NoiseSmall": TestMatrixSpec("low_rank_plus_noise", 1e-2, name="NoiseSmall"),
    "NoiseMedium": TestMatrixSpec("low_rank_plus_noise", 1e-1, name="NoiseMedium"),
    "NoiseLarge": TestMatrixSpec("low_rank_plus_noise", 1.0, name="NoiseLarge"),
    "DecaySlow": TestMatrixSpec("low_rank_plus_decay", 0.5, name="DecaySlow"),
    "DecayMedium": TestMatrixSpec("low_rank_plus_decay", 1.0, name="DecayMedium"),
    "DecayFast": TestMatrixSpec("low_rank_plus_decay", 2.0, name="DecayFast"),
}


def named_matrix(name):
    """Generate one of the nine named matrices (e.g. ``"GapLarge"``)."""
    return NAMED_MATRICES[name].generate()
