import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsvd_diag.linalg import singular_values
from rsvd_diag.sketch import rng
from rsvd_diag.testmatrices import (
    NAMED_MATRICES,
    TestMatrixSpec,
    controlled_gap,
    decay_spectrum,
    low_rank_plus_decay,
    low_rank_plus_noise,
    sprand_vector,
)


def test_named_parameters():
    assert [NAMED_MATRICES[n].param for n in ("GapSmall", "GapMedium", "GapLarge")] == [1.0, 2.0, 10.0]
    assert [NAMED_MATRICES[n].param for n in ("NoiseSmall", "NoiseMedium", "NoiseLarge")] == [1e-2, 1e-1, 1.0]
    assert [NAMED_MATRICES[n].param for n in ("DecaySlow", "DecayMedium", "DecayFast")] == [0.5, 1.0, 2.0]
    assert all(s.r == 15 and s.n == 300 for s in NAMED_MATRICES.values())
    assert NAMED_MATRICES["GapLarge"].generate().shape == (3000, 300)


def test_gap_jump_grows_with_gap(named):
    small = named("GapSmall", 15)[1].s
    large = named("GapLarge", 15)[1].s
    assert large[14] / large[15] > 3 * small[14] / small[15]


def test_controlled_gap_nonnegative(named):
    A, _ = named("GapMedium")
    assert A.min() >= 0.0


def test_controlled_gap_decay_shape(named):
    s = named("GapSmall")[1].s
    # roughly 1/j: the spectrum drops by more than an order of magnitude over the first 100 values
    assert s[0] / s[99] > 10


@pytest.mark.parametrize("family,param", [("controlled_gap", 2.0), ("low_rank_plus_noise", 0.1), ("low_rank_plus_decay", 1.0)])
def test_seed_determinism(family, param):
    spec = TestMatrixSpec(family, param, n=40, r=5, m=200)
    assert spec.generate().tobytes() == spec.generate().tobytes()
    other = TestMatrixSpec(family, param, n=40, r=5, m=200, seed=1)
    assert not np.array_equal(spec.generate(), other.generate())


def test_noise_limit():
    s = singular_values(low_rank_plus_noise(50, 6, 1e-30, 0))
    np.testing.assert_allclose(s[:6], 1.0, atol=1e-12)
    assert s[6] < 1e-12


def test_noise_small_spectrum(named):
    s = named("NoiseSmall")[1].s
    assert np.all(np.abs(s[:15] - 1.0) <= 0.1)
    assert s[15] < 0.1 * s[14]


def test_noise_symmetric():
    A = low_rank_plus_noise(30, 4, 0.1, 3)
    assert np.array_equal(A, A.T)


def test_decay_spectrum_exact():
    A = low_rank_plus_decay(60, 5, 1.5, 9)
    np.testing.assert_allclose(singular_values(A), decay_spectrum(60, 5, 1.5), rtol=1e-12, atol=1e-14)


def test_decay_fast_sigma_16(named):
    s = named("DecayFast")[1].s
    assert s[15] == pytest.approx(0.25, rel=1e-12)
    np.testing.assert_allclose(s[:15], 1.0, rtol=1e-12)
    assert decay_spectrum(300, 15, 2.0)[15] == 2.0**-2


def test_sprand_vector_density():
    v = sprand_vector(rng(0), 3000, 0.025)
    assert np.count_nonzero(v) == math.ceil(0.025 * 3000)
    assert v.min() >= 0.0 and v.max() < 1.0


def test_spec_validation_and_roundtrip():
    spec = TestMatrixSpec("low_rank_plus_decay", 2.0, n=50, r=4, name="x")
    assert TestMatrixSpec.from_dict(spec.to_dict()) == spec
    assert spec.label == "x"
    assert TestMatrixSpec("low_rank_plus_noise", 0.1).label == "low_rank_plus_noise-0.1"
    for bad in (("nope", 1.0), ("controlled_gap", 0.0)):
        with pytest.raises(ValueError):
            TestMatrixSpec(*bad)
    with pytest.raises(ValueError):
        TestMatrixSpec("controlled_gap", 1.0, n=10, r=11)


def test_generator_argument_checks():
    with pytest.raises(ValueError):
        controlled_gap(-1.0, 0)
    with pytest.raises(ValueError):
        low_rank_plus_noise(5, 6, 0.1, 0)
    with pytest.raises(ValueError):
        low_rank_plus_decay(5, 2, 0.0, 0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 20.0))
def test_controlled_gap_properties(seed, gap):
    A = controlled_gap(gap, seed, m=120, n=30, r=4, density=0.1)
    assert A.shape == (120, 30) and A.min() >= 0.0
    assert np.array_equal(A, controlled_gap(gap, seed, m=120, n=30, r=4, density=0.1))
