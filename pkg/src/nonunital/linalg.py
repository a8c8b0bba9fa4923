"""Hermitian eigendecomposition kernel and the matrix functions built on it.

Every function accepts a single ``(d, d)`` matrix or a stack ``(..., d, d)``.
For ``d == 2`` the decomposition is evaluated in closed form, which keeps the
large state sweeps in :mod:`nonunital.measures` vectorized; other dimensions
go through LAPACK.
"""
import numpy as np

from .errors import NotHermitianError, NotPSDError
from .policy import DEFAULT_POLICY


def _eigh2(h):
    a = h[..., 0, 0].real
    c = h[..., 1, 1].real
    b = h[..., 0, 1]
    mean = 0.5 * (a + c)
    half = 0.5 * (a - c)
    radius = np.hypot(half, np.abs(b))
    evals = np.stack([mean - radius, mean + radius], axis=-1)

    # Eigenvector of the upper eigenvalue, using whichever form avoids cancellation.
    pos = half >= 0
    x0 = np.where(pos, radius + half, b)
    x1 = np.where(pos, np.conj(b), radius - half)
    norm = np.sqrt(np.abs(x0) ** 2 + np.abs(x1) ** 2)
    degenerate = norm == 0
    safe = np.where(degenerate, 1.0, norm)
    u0 = np.where(degenerate, 1.0, x0 / safe)
    u1 = np.where(degenerate, 0.0, x1 / safe)

    vecs = np.empty(h.shape, dtype=complex)
    vecs[..., 0, 1] = u0
    vecs[..., 1, 1] = u1
    vecs[..., 0, 0] = -np.conj(u1)
    vecs[..., 1, 0] = np.conj(u0)
    return evals, vecs


def _eigvalsh2(h):
    a = h[..., 0, 0].real
    c = h[..., 1, 1].real
    mean = 0.5 * (a + c)
    radius = np.hypot(0.5 * (a - c), np.abs(h[..., 0, 1]))
    return np.stack([mean - radius, mean + radius], axis=-1)


def eigh(h):
    """Eigenvalues (ascending) and eigenvectors (columns) of Hermitian ``h``."""
    h = np.asarray(h)
    if h.shape[-1] == 2:
        return _eigh2(h)
    return np.linalg.eigh(h)


def eigvalsh(h):
    h = np.asarray(h)
    if h.shape[-1] == 2:
        return _eigvalsh2(h)
    return np.linalg.eigvalsh(h)


def dagger(a):
    return np.conj(np.swapaxes(a, -1, -2))


def check_hermitian(h, tol=DEFAULT_POLICY.structural):
    h = np.asarray(h)
    scale = max(1.0, float(np.max(np.abs(h), initial=0.0)))
    err = float(np.max(np.abs(h - dagger(h)), initial=0.0))
    if err > tol * scale:
        raise NotHermitianError(f"matrix is not Hermitian (max |H - H^dag| = {err:.3e})")


def clamp_psd(evals, tol=DEFAULT_POLICY.psd):
    """Zero eigenvalues in ``[-tol, 0)``; raise :class:`NotPSDError` below that."""
    lowest = float(np.min(evals))
    if lowest < -tol:
        raise NotPSDError(f"matrix is not positive semidefinite (eigenvalue {lowest:.3e})")
    return np.maximum(evals, 0.0)


def apply_function(evals, vecs, values):
    """Rebuild ``V diag(values) V^dag`` from an eigendecomposition."""
    return np.einsum("...ik,...k,...jk->...ij", vecs, values, np.conj(vecs))


def matmul(a, b):
    """Stacked matrix product with an unrolled path for 2x2 stacks."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != 2 or b.shape[-2:] != (2, 2):
        return a @ b
    a00, a01, a10, a11 = a[..., 0, 0], a[..., 0, 1], a[..., 1, 0], a[..., 1, 1]
    b00, b01, b10, b11 = b[..., 0, 0], b[..., 0, 1], b[..., 1, 0], b[..., 1, 1]
    return _pack2(a00 * b00 + a01 * b10, a00 * b01 + a01 * b11,
                  a10 * b00 + a11 * b10, a10 * b01 + a11 * b11)


def _pack2(x00, x01, x10, x11):
    x00, x01, x10, x11 = np.broadcast_arrays(x00, x01, x10, x11)
    out = np.empty(x00.shape + (2, 2), dtype=np.result_type(x00, x01, x10, x11))
    out[..., 0, 0] = x00
    out[..., 0, 1] = x01
    out[..., 1, 0] = x10
    out[..., 1, 1] = x11
    return out


def psd_sqrt(h, tol=DEFAULT_POLICY.psd):
    h = np.asarray(h)
    if h.shape[-1] == 2:
        # Cayley-Hamilton: sqrt(H) = (H + sqrt(det H) 1) / (sqrt(l0) + sqrt(l1)).
        roots = np.sqrt(clamp_psd(_eigvalsh2(h), tol))
        s = roots[..., 0] * roots[..., 1]
        total = roots[..., 0] + roots[..., 1]
        zero = total == 0
        total = np.where(zero, 1.0, total)
        out = _pack2((h[..., 0, 0].real + s) / total, h[..., 0, 1] / total,
                     h[..., 1, 0] / total, (h[..., 1, 1].real + s) / total)
        return np.where(zero[..., None, None], 0.0, out)
    evals, vecs = eigh(h)
    return apply_function(evals, vecs, np.sqrt(clamp_psd(evals, tol)))


def trace_norm(h, tol=DEFAULT_POLICY.structural, check=True):
    """Trace norm ``Tr|h|`` of a Hermitian matrix, as the sum of |eigenvalues|."""
    if check:
        check_hermitian(h, tol)
    return np.sum(np.abs(eigvalsh(h)), axis=-1)


def polar_unitary(x):
    """Unitary factor ``W`` of the polar decomposition ``x = W |x|``.

    For 2x2 input this uses ``W = (x + e^{i theta} adj(x)^dag) / Tr|x|`` with
    ``e^{i theta} = det x / |det x|`` (any phase works when ``x`` is singular).
    """
    x = np.asarray(x, dtype=complex)
    if x.shape[-1] != 2:
        u, _, vh = np.linalg.svd(x)
        return u @ vh
    x00, x01, x10, x11 = x[..., 0, 0], x[..., 0, 1], x[..., 1, 0], x[..., 1, 1]
    det = x00 * x11 - x01 * x10
    mag = np.abs(det)
    phase = np.where(mag > 0, det / np.where(mag > 0, mag, 1.0), 1.0)
    y00 = x00 + phase * np.conj(x11)
    y01 = x01 - phase * np.conj(x10)
    y10 = x10 - phase * np.conj(x01)
    y11 = x11 + phase * np.conj(x00)
    norm = np.sqrt((np.abs(y00) ** 2 + np.abs(y01) ** 2 + np.abs(y10) ** 2
                    + np.abs(y11) ** 2) / 2)
    zero = norm == 0
    norm = np.where(zero, 1.0, norm)
    return _pack2(np.where(zero, 1.0, y00 / norm), y01 / norm, y10 / norm,
                  np.where(zero, 1.0, y11 / norm))
