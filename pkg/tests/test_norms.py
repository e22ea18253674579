import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from rsvd_diag.linalg import singular_values
from rsvd_diag.norms import NormSpec, NormSpecError, gauge, matrix_norm

from .oracles import random_orthonormal

seeds = st.integers(0, 2**32 - 1)
SPECS = [NormSpec.spectral(), NormSpec.frobenius(), NormSpec.schatten(1), NormSpec.schatten(3.5), NormSpec.kyfan(2)]
spec_strategy = st.sampled_from(SPECS)


def test_gauge_small_cases():
    assert gauge([3.0, 1.0], NormSpec.schatten(math.inf)) == 3.0
    assert gauge([3.0, 1.0], NormSpec.schatten(2)) == pytest.approx(math.sqrt(10), rel=1e-15)
    assert gauge([5.0, 4.0, 3.0, 2.0, 1.0], NormSpec.kyfan(3)) == 12.0


def test_identity_frobenius():
    assert matrix_norm(np.eye(9), NormSpec.frobenius()) == pytest.approx(3.0, rel=1e-15)


def test_orthonormal_kyfan(gen):
    Q = random_orthonormal(gen, 10, 4)
    assert matrix_norm(Q, NormSpec.kyfan(4)) == pytest.approx(4.0, rel=1e-14)


def test_gapsmall_schatten4_matches_oracle(named, oracle_spectrum):
    A, _ = named("GapSmall")
    sv = oracle_spectrum("GapSmall")
    expected = np.sum(sv**4) ** 0.25
    assert matrix_norm(A, NormSpec.schatten(4)) == pytest.approx(expected, rel=1e-10)


def test_parse_and_str_roundtrip():
    for text in ("spectral", "frobenius", "schatten:1", "schatten:4", "kyfan:5"):
        assert str(NormSpec.parse(text)) == text
    assert NormSpec.parse("schatten:inf") == NormSpec.spectral()
    assert NormSpec.parse("schatten:2") == NormSpec.frobenius()


@pytest.mark.parametrize("text", ["", "l2", "schatten:0.5", "kyfan:0", "kyfan:2.5", "schatten:x"])
def test_parse_rejects(text):
    with pytest.raises(NormSpecError):
        NormSpec.parse(text)


def test_phi():
    assert NormSpec.spectral().phi == 1.0
    assert NormSpec.frobenius().phi == 1.0
    assert NormSpec.kyfan(1).phi == 1.0
    assert NormSpec.schatten(3).phi == math.sqrt(2)
    assert NormSpec.kyfan(3).phi == math.sqrt(2)


def test_gauge_errors():
    with pytest.raises(NormSpecError):
        gauge([1.0, -0.1], NormSpec.frobenius())
    with pytest.raises(NormSpecError):
        gauge([1.0], NormSpec.kyfan(2))


def test_large_p_no_overflow():
    assert gauge([1e300, 1e300], NormSpec.schatten(50)) == pytest.approx(1e300 * 2 ** (1 / 50))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 9), st.integers(2, 9), spec_strategy)
def test_unitary_invariance(seed, m, n, spec):
    assume(spec.kind != "kyfan" or spec.k <= min(m, n))
    gen = np.random.default_rng(seed)
    A = gen.standard_normal((m, n))
    Q, Z = random_orthonormal(gen, m, m), random_orthonormal(gen, n, n)
    assert matrix_norm(Q @ A @ Z, spec) == pytest.approx(matrix_norm(A, spec), rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 8), spec_strategy, st.floats(-5, 5))
def test_triangle_and_homogeneity(seed, n, spec, c):
    gen = np.random.default_rng(seed)
    A, Bm = gen.standard_normal((n, n)), gen.standard_normal((n, n))
    assume(spec.kind != "kyfan" or spec.k <= n)
    assert matrix_norm(A + Bm, spec) <= matrix_norm(A, spec) + matrix_norm(Bm, spec) + 1e-12
    assert matrix_norm(c * A, spec) == pytest.approx(abs(c) * matrix_norm(A, spec), rel=1e-12, abs=1e-300)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 7), spec_strategy)
def test_strong_submultiplicativity(seed, n, spec):
    assume(spec.kind != "kyfan" or spec.k <= n)
    gen = np.random.default_rng(seed)
    A, Bm, C = (gen.standard_normal((n, n)) for _ in range(3))
    lhs = matrix_norm(A @ Bm @ C, spec)
    rhs = singular_values(A)[0] * singular_values(C)[0] * matrix_norm(Bm, spec)
    assert lhs <= rhs * (1 + 1e-12)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 8), st.floats(0.0, 1.0))
def test_fan_dominance(seed, n, shrink):
    gen = np.random.default_rng(seed)
    sb = np.sort(gen.random(n))[::-1]
    # a doubly stochastic mixture followed by a contraction is weakly majorized
    perms = [gen.permutation(n) for _ in range(3)]
    w = gen.dirichlet(np.ones(3))
    sa = shrink * sum(wi * sb[p] for wi, p in zip(w, perms))
    for k in range(1, n + 1):
        assume(gauge(sa, NormSpec.kyfan(k)) <= gauge(sb, NormSpec.kyfan(k)) + 1e-15)
    for p in (1, 1.5, 2, 3, 7):
        assert gauge(sa, NormSpec.schatten(p)) <= gauge(sb, NormSpec.schatten(p)) * (1 + 1e-12)
    assert gauge(sa, NormSpec.spectral()) <= gauge(sb, NormSpec.spectral()) * (1 + 1e-12)
