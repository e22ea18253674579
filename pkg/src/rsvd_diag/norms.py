"""Unitarily invariant norms evaluated through symmetric gauge functions."""
import math
from dataclasses import dataclass

import numpy as np

from .linalg import singular_values


class NormSpecError(ValueError):
    pass


@dataclass(frozen=True)
class NormSpec:
    """A unitarily invariant norm.

    ``kind`` is one of ``"spectral"`` (Schatten-infinity), ``"schatten"``
    (finite ``p >= 1``) or ``"kyfan"`` (sum of the ``k`` largest singular
    values). Use the constructors rather than building instances directly.
    """

    kind: str
    p: float | None = None
    k: int | None = None

    def __post_init__(self):
        if self.kind == "schatten":
            if self.p is None or not self.p >= 1 or math.isinf(self.p):
                raise NormSpecError(f"schatten p must be finite and >= 1, got {self.p}")
        elif self.kind == "kyfan":
            if self.k is None or self.k < 1:
                raise NormSpecError(f"kyfan k must be >= 1, got {self.k}")
        elif self.kind != "spectral":
            raise NormSpecError(f"unknown norm kind {self.kind!r}")

    @classmethod
    def spectral(cls):
        return cls("spectral")

    @classmethod
    def frobenius(cls):
        return cls("schatten", p=2.0)

    @classmethod
    def schatten(cls, p):
        p = float(p)
        if math.isinf(p) and p > 0:
            return cls.spectral()
        return cls("schatten", p=p)

    @classmethod
    def kyfan(cls, k):
        return cls("kyfan", k=int(k))

    @classmethod
    def parse(cls, text):
        """Parse ``spectral``, ``frobenius``, ``schatten:<p>`` or ``kyfan:<k>``."""
        text = text.strip().lower()
        if text == "spectral":
            return cls.spectral()
        if text == "frobenius":
            return cls.frobenius()
        name, sep, arg = text.partition(":")
        if not sep:
            raise NormSpecError(f"cannot parse norm spec {text!r}")
        try:
            if name == "schatten":
                return cls.schatten(float(arg))
            if name == "kyfan":
                if not arg.isdigit():
                    raise NormSpecError(f"kyfan needs an integer, got {arg!r}")
                return cls.kyfan(int(arg))
        except ValueError as exc:
            raise NormSpecError(f"cannot parse norm spec {text!r}") from exc
        raise NormSpecError(f"cannot parse norm spec {text!r}")

    def __str__(self):
        if self.kind == "spectral":
            return "spectral"
        if self.kind == "kyfan":
            return f"kyfan:{self.k}"
        if self.p == 2.0:
            return "frobenius"
        return f"schatten:{self.p:g}"

    @property
    def is_spectral(self):
        return self.kind == "spectral" or (self.kind == "kyfan" and self.k == 1)

    @property
    def is_frobenius(self):
        return self.kind == "schatten" and self.p == 2.0

    @property
    def schatten_p(self):
        """Schatten exponent, ``inf`` for spectral, ``None`` for Ky-Fan (k > 1)."""
        if self.is_spectral:
            return math.inf
        return self.p if self.kind == "schatten" else None

    @property
    def phi(self):
        """1 for the spectral and Frobenius norms, sqrt(2) for any other."""
        return 1.0 if (self.is_spectral or self.is_frobenius) else math.sqrt(2.0)


def gauge(sv, spec):
    """Symmetric gauge function of ``spec`` applied to a singular-value vector.

    ``sv`` must be nonnegative; ordering is not required for Schatten norms,
    Ky-Fan norms sort internally.
    """
    sv = np.asarray(sv, dtype=np.float64).ravel()
    if np.any(sv < 0):
        raise NormSpecError("singular values must be nonnegative")
    if spec.kind == "kyfan":
        if spec.k > sv.size:
            raise NormSpecError(f"kyfan:{spec.k} needs at least {spec.k} values, got {sv.size}")
        top = np.sort(sv)[::-1][: spec.k]
        return math.fsum(top.tolist())
    if sv.size == 0:
        return 0.0
    top = float(np.max(sv))
    if spec.kind == "spectral" or top == 0.0:
        return top
    p = spec.p
    # scale by the largest value so that large p cannot overflow
    scaled = (sv / top) ** p
    return top * math.fsum(scaled.tolist()) ** (1.0 / p)


def matrix_norm(A, spec):
    """Unitarily invariant norm of a matrix: ``gauge(singular_values(A), spec)``."""
    return gauge(singular_values(A), spec)
