"""Orthonormal Hermitian operator basis and coordinate maps.

The basis for dimension ``d`` is ``lambda_0 = 1/sqrt(d)`` followed by the
``d**2 - 1`` generalized Gell-Mann matrices scaled by ``1/sqrt(2)`` so that
``Tr(lambda_mu lambda_nu) = delta_mu_nu``. Order after ``lambda_0``:

1. symmetric ``(|j><k| + |k><j|)/sqrt(2)`` for ``j < k`` in lexicographic order,
2. antisymmetric ``(-i|j><k| + i|k><j|)/sqrt(2)`` for ``j < k``, same order,
3. diagonal ``(sum_{j<l} |j><j| - l|l><l|)/sqrt(l(l+1))`` for ``l = 1..d-1``.

For ``d = 2`` this gives ``(1, sigma_x, sigma_y, sigma_z)/sqrt(2)``.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import DimensionMismatchError, InvalidDimensionError
from .policy import DEFAULT_POLICY


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    dim: int
    ops: np.ndarray  # (d**2, d, d), read-only

    def __len__(self):
        return self.ops.shape[0]

    def __getitem__(self, mu):
        return self.ops[mu]


@lru_cache(maxsize=None)
def build_basis(d: int) -> HermitianBasis:
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool) or d < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {d!r}")
    d = int(d)
    ops = [np.eye(d, dtype=complex) / np.sqrt(d)]
    pairs = list(combinations(range(d), 2))
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = m[k, j] = 1.0
        ops.append(m / np.sqrt(2))
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        ops.append(m / np.sqrt(2))
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        ops.append(np.diag(diag).astype(complex) / np.sqrt(l * (l + 1)))
    arr = np.array(ops)
    arr.setflags(write=False)
    return HermitianBasis(d, arr)


def expand(o, basis: HermitianBasis, tol=DEFAULT_POLICY.structural):
    """Coordinates ``r_mu = Tr(lambda_mu^dag O)``; real if ``O`` is Hermitian.

    Accepts a stack of matrices; coordinates go on the last axis.
    """
    o = np.asarray(o)
    d = basis.dim
    if o.shape[-2:] != (d, d):
        raise DimensionMismatchError(f"expected ({d}, {d}) operator, got shape {o.shape}")
    r = np.einsum("kij,...ij->...k", basis.ops.conj(), o)
    if np.max(np.abs(r.imag), initial=0.0) <= tol:
        return r.real
    return r


def reconstruct(r, basis: HermitianBasis):
    """Inverse of :func:`expand`: ``sum_mu r_mu lambda_mu``."""
    r = np.asarray(r)
    if r.shape[-1] != len(basis):
        raise DimensionMismatchError(
            f"expected {len(basis)} coordinates, got {r.shape[-1]}")
    return np.einsum("...k,kij->...ij", r, basis.ops)
