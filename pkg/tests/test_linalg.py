import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from nonunital import linalg
from nonunital.errors import NotHermitianError, NotPSDError

entries = st.floats(-3, 3, allow_subnormal=False)


def _hermitian(parts):
    h = parts[0] + 1j * parts[1]
    return 0.5 * (h + h.conj().T)


@given(arrays(float, (2, 2, 2), elements=entries))
def test_closed_form_2x2_matches_lapack(parts):
    h = _hermitian(parts)
    evals, vecs = linalg.eigh(h)
    assert np.allclose(evals, np.linalg.eigvalsh(h), atol=1e-12)
    assert np.allclose(vecs @ np.diag(evals) @ vecs.conj().T, h, atol=1e-12)
    assert np.allclose(vecs.conj().T @ vecs, np.eye(2), atol=1e-12)


def test_closed_form_handles_degenerate_and_diagonal():
    for h in (np.eye(2), np.diag([3.0, -1.0]), np.diag([-1.0, 3.0]), np.zeros((2, 2))):
        evals, vecs = linalg.eigh(h.astype(complex))
        assert np.allclose(vecs @ np.diag(evals) @ vecs.conj().T, h)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_psd_sqrt_squares_back(d, rng):
    g = rng.standard_normal((10, d, d)) + 1j * rng.standard_normal((10, d, d))
    p = g @ linalg.dagger(g)
    s = linalg.psd_sqrt(p)
    assert np.allclose(s @ s, p, atol=1e-10)
    assert np.allclose(s, linalg.dagger(s))
    assert np.allclose(s[0], scipy.linalg.sqrtm(p[0]), atol=1e-10)


def test_psd_sqrt_of_rank_one():
    v = np.array([0.6, 0.8j])
    p = np.outer(v, v.conj())
    assert np.allclose(linalg.psd_sqrt(p), p, atol=1e-8)


def test_clamp_rejects_clearly_negative():
    assert np.array_equal(linalg.clamp_psd(np.array([-1e-11, 0.5])), [0.0, 0.5])
    with pytest.raises(NotPSDError):
        linalg.clamp_psd(np.array([-1e-6, 1.0]))
    with pytest.raises(NotPSDError):
        linalg.psd_sqrt(np.diag([1.0, -0.1]).astype(complex))


def test_trace_norm_checks_hermiticity():
    assert np.isclose(linalg.trace_norm(np.diag([1.0, -2.0, 0.5])), 3.5)
    with pytest.raises(NotHermitianError):
        linalg.trace_norm(np.array([[0, 1], [0, 0]], dtype=complex))


@pytest.mark.parametrize("d", [2, 3])
def test_polar_unitary(d, rng):
    x = rng.standard_normal((50, d, d)) + 1j * rng.standard_normal((50, d, d))
    w = linalg.polar_unitary(x)
    p = linalg.dagger(w) @ x
    assert np.allclose(w @ linalg.dagger(w), np.eye(d), atol=1e-12)
    assert np.allclose(p, linalg.dagger(p), atol=1e-12)
    assert np.min(np.linalg.eigvalsh(0.5 * (p + linalg.dagger(p)))) > -1e-12


def test_polar_unitary_of_singular_matrix():
    x = np.array([[1.0, 2.0], [0.5, 1.0]], dtype=complex)
    w = linalg.polar_unitary(x)
    assert np.allclose(w @ w.conj().T, np.eye(2))
    p = w.conj().T @ x
    assert np.allclose(p, p.conj().T) and np.min(np.linalg.eigvalsh(p)) > -1e-12


def test_unrolled_matmul(rng):
    a = rng.standard_normal((7, 2, 2)) + 1j * rng.standard_normal((7, 2, 2))
    b = rng.standard_normal((2, 2))
    assert np.allclose(linalg.matmul(a, b), a @ b)
