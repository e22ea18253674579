import functools

import numpy as np
import pytest

from rsvd_diag.bounds import ReferenceSvd
from rsvd_diag.testmatrices import NAMED_MATRICES


@functools.lru_cache(maxsize=None)
def _matrix(name):
    A = NAMED_MATRICES[name].generate()
    A.setflags(write=False)
    return A


@functools.lru_cache(maxsize=None)
def _reference(name):
    return ReferenceSvd.from_matrix(_matrix(name), 1)


@pytest.fixture(scope="session")
def named():
    """``named(name, k)`` -> (A, ReferenceSvd split at k), cached per session."""

    def get(name, k=25):
        return _matrix(name), _reference(name).with_k(k)

    return get


@pytest.fixture
def gen():
    return np.random.default_rng(12345)


@functools.lru_cache(maxsize=None)
def _oracle_spectrum(name):
    from .oracles import singular_values_via_jacobi

    return singular_values_via_jacobi(_matrix(name))


@pytest.fixture(scope="session")
def oracle_spectrum():
    """Singular values of a named matrix from the Jacobi eigensolver oracle."""
    return _oracle_spectrum


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
