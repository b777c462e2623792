import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from artifact import _kernels_py, kernels
from artifact.wiener import SU2_BASIS, quaternion_to_matrix

try:
    from artifact import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "numpy")
    if _ckernels is not None:
        assert kernels.BACKEND == "cython"


def test_expsum_direct():
    pts = np.array([[0.0, 1.0], [2.0, -1.0]])
    w = np.array([1.0, 2.0j])
    Z = np.array([[0.3j, 0.1], [0.0, 0.0]])
    ref = [sum(w[j] * np.exp(Z[p] @ pts[j]) for j in range(2)) for p in range(2)]
    assert np.allclose(_kernels_py.expsum(pts, w, Z), ref, atol=1e-15)


def test_mckean_matches_expm_product():
    rng = np.random.default_rng(3)
    inc = rng.normal(size=(3, 7, 3)) * 0.4
    q = _kernels_py.su2_mckean(inc)
    for p in range(3):
        g = np.eye(2, dtype=complex)
        for j in range(7):
            g = g @ expm(np.einsum("a,aij->ij", inc[p, j], SU2_BASIS))
        assert np.allclose(quaternion_to_matrix(q[p]), g, atol=1e-13)


@needs_c
@given(st.integers(1, 40), st.integers(1, 30), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_expsum_backends_agree(m, p, d, seed):
    rng = np.random.default_rng(seed)
    pts = rng.integers(-6, 7, size=(m, d)).astype(float)
    w = rng.normal(size=m) + 1j * rng.normal(size=m)
    Z = rng.normal(size=(p, d)) * 0.1 + 1j * rng.normal(size=(p, d))
    a = _kernels_py.expsum(pts, w, Z)
    b = _ckernels.expsum(pts, w, Z)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12 * np.abs(w).sum())


@needs_c
@given(st.integers(1, 20), st.integers(0, 50), st.integers(0, 2**32 - 1))
def test_mckean_backends_agree(paths, steps, seed):
    inc = np.random.default_rng(seed).normal(size=(paths, steps, 3)) * 0.2
    assert np.allclose(_kernels_py.su2_mckean(inc), _ckernels.su2_mckean(inc), atol=1e-13)
