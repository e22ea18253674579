"""Deterministic bounds and diagnostics for randomized subspace iteration.

Compares measured canonical angles, singular values and low-rank errors of a
randomized SVD against structural and Gaussian-probabilistic bounds.
"""
from .angles import AngleSet, canonical_angles, sin_angle_norm
from .bounds import ReferenceSvd, gaussian_constants, required_iterations, split_omega
from .norms import NormSpec, gauge, matrix_norm
from .report import BoundReport, build_report
from .sketch import ApproxSvd, SketchConfig, gaussian_guess, rand_svd, range_finder, truncate
from .testmatrices import NAMED_MATRICES, TestMatrixSpec

__version__ = "0.1.0"

__all__ = [
    "AngleSet",
    "ApproxSvd",
    "BoundReport",
    "NormSpec",
    "NAMED_MATRICES",
    "ReferenceSvd",
    "SketchConfig",
    "TestMatrixSpec",
    "build_report",
    "canonical_angles",
    "gauge",
    "gaussian_constants",
    "gaussian_guess",
    "matrix_norm",
    "rand_svd",
    "range_finder",
    "required_iterations",
    "sin_angle_norm",
    "split_omega",
    "truncate",
]
