import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsvd_diag.linalg import LinalgError
from rsvd_diag.mmio import read_matrix_market, write_matrix_market


def test_roundtrip_exact(tmp_path, gen):
    A = gen.standard_normal((7, 4)) * 10.0 ** gen.integers(-200, 200, size=(7, 4))
    path = write_matrix_market(tmp_path / "a.mtx", A, comment="seed 1")
    B = read_matrix_market(path)
    assert B.tobytes() == A.tobytes()
    assert "seed 1" in path.read_text()


def test_read_from_string():
    text = "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n"
    np.testing.assert_array_equal(read_matrix_market(text), [[1.0, 3.0], [2.0, 4.0]])


def test_read_coordinate_as_dense():
    text = "%%MatrixMarket matrix coordinate real general\n2 3 2\n1 1 5.0\n2 3 -1.5\n"
    np.testing.assert_array_equal(read_matrix_market(text), [[5.0, 0, 0], [0, 0, -1.5]])


def test_write_rejects_nonfinite(tmp_path):
    with pytest.raises(LinalgError):
        write_matrix_market(tmp_path / "bad.mtx", [[np.inf]])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 6))
def test_roundtrip_property(tmp_path_factory, seed, m, n):
    A = np.random.default_rng(seed).standard_normal((m, n))
    path = write_matrix_market(tmp_path_factory.mktemp("mm") / "x.mtx", A)
    assert read_matrix_market(path).tobytes() == A.tobytes()
