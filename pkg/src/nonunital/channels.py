"""Quantum channels as Kraus sets, transfer matrices, affine maps and Choi matrices.

The transfer matrix ``T_{mu nu} = <lambda_mu, E(lambda_nu)>`` is the canonical
form. In the ``lambda_0``-first basis it has the block shape::

    T = [[1,            0],
         [sqrt(d) * c,  M]]

and acts on Bloch vectors as ``r -> M r + c``.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import DimensionMismatchError, NotAStateError, NotTracePreservingError
from .operator_basis import HermitianBasis, build_basis, expand
from .policy import DEFAULT_POLICY
from .states import BlochState, density_matrices


def _frozen(a, dtype):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _dim_from_size(n):
    d = int(round(np.sqrt(n)))
    if d * d != n:
        raise DimensionMismatchError(f"{n} is not a square dimension")
    return d


@dataclass(frozen=True, eq=False)
class KrausSet:
    ops: np.ndarray  # (k, d, d)

    def __post_init__(self):
        ops = _frozen(self.ops, complex)
        if ops.ndim == 2:
            ops = _frozen(ops[None], complex)
        if ops.ndim != 3 or ops.shape[1] != ops.shape[2]:
            raise DimensionMismatchError(f"Kraus operators must be square, got {ops.shape}")
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self):
        return self.ops.shape[1]

    def tp_error(self):
        s = np.einsum("kji,kjl->il", self.ops.conj(), self.ops)
        return float(np.max(np.abs(s - np.eye(self.dim))))

    def apply(self, rho):
        """Direct Kraus action ``sum_i E_i rho E_i^dag``."""
        return np.einsum("kij,jl,kml->im", self.ops, rho, self.ops.conj())


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    matrix: np.ndarray  # real (d**2, d**2)

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if np.iscomplexobj(m):
            if np.max(np.abs(m.imag), initial=0.0) > DEFAULT_POLICY.structural:
                raise ValueError("transfer matrix has non-negligible imaginary part")
            m = m.real
        m = _frozen(m, float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"transfer matrix must be square, got {m.shape}")
        _dim_from_size(m.shape[0])
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return _dim_from_size(self.matrix.shape[0])

    def tp_error(self):
        e0 = np.zeros(self.matrix.shape[0])
        e0[0] = 1.0
        return float(np.max(np.abs(self.matrix[0] - e0)))


@dataclass(frozen=True, eq=False)
class AffineMap:
    m: np.ndarray  # (d**2-1, d**2-1)
    c: np.ndarray  # (d**2-1,)

    def __post_init__(self):
        m = _frozen(self.m, float)
        c = _frozen(self.c, float)
        n = c.shape[0]
        if m.shape != (n, n):
            raise DimensionMismatchError(f"M has shape {m.shape} but c has length {n}")
        _dim_from_size(n + 1)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "c", c)

    @property
    def dim(self):
        return _dim_from_size(self.c.shape[0] + 1)


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    matrix: np.ndarray  # Hermitian (d**2, d**2), unit trace

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix, complex))

    @property
    def dim(self):
        return _dim_from_size(self.matrix.shape[0])


def identity_transfer(d: int) -> TransferMatrix:
    return TransferMatrix(np.eye(d * d))


def transfer_from_kraus(k: KrausSet, basis: HermitianBasis = None,
                        policy=DEFAULT_POLICY) -> TransferMatrix:
    basis = basis or build_basis(k.dim)
    if basis.dim != k.dim:
        raise DimensionMismatchError(f"Kraus set has d={k.dim}, basis has d={basis.dim}")
    err = k.tp_error()
    if err > policy.trace:
        raise NotTracePreservingError(f"sum E_i^dag E_i deviates from identity by {err:.3e}")
    images = np.einsum("kab,nbc,kdc->nad", k.ops, basis.ops, k.ops.conj())
    # images[nu] = E(lambda_nu); column nu of T holds its coordinates.
    t = expand(images, basis).T
    return TransferMatrix(np.real(t))


def affine_from_transfer(t: TransferMatrix, policy=DEFAULT_POLICY) -> AffineMap:
    err = t.tp_error()
    if err > policy.trace:
        raise NotTracePreservingError(f"first row of T deviates from (1, 0, ..., 0) by {err:.3e}")
    d = t.dim
    return AffineMap(t.matrix[1:, 1:], t.matrix[1:, 0] / np.sqrt(d))


def transfer_from_affine(a: AffineMap) -> TransferMatrix:
    n = a.c.shape[0]
    t = np.zeros((n + 1, n + 1))
    t[0, 0] = 1.0
    t[1:, 0] = np.sqrt(a.dim) * a.c
    t[1:, 1:] = a.m
    return TransferMatrix(t)


def apply_channel(t: TransferMatrix, s: BlochState, strict=False,
                  policy=DEFAULT_POLICY) -> BlochState:
    """Bloch vector update ``r -> M r + c``.

    The output is not validated unless ``strict`` is set, so non-positive maps
    can be applied deliberately; check ``BlochState.is_valid`` on the result.
    """
    if t.dim != s.dim:
        raise DimensionMismatchError(f"map has d={t.dim}, state has d={s.dim}")
    out = BlochState(s.dim, t.matrix[1:, 1:] @ s.bloch + t.matrix[1:, 0] / np.sqrt(s.dim))
    if strict and not out.is_valid(policy.psd):
        raise NotAStateError(
            f"map output is not a state (eigenvalue {out.min_eigenvalue():.3e})")
    return out


def compose(t1: TransferMatrix, t2: TransferMatrix) -> TransferMatrix:
    """Transfer matrix of ``E1 o E2`` (``E2`` acts first)."""
    if t1.matrix.shape != t2.matrix.shape:
        raise DimensionMismatchError("cannot compose maps of different dimension")
    return TransferMatrix(t1.matrix @ t2.matrix)


@lru_cache(maxsize=None)
def _choi_kernel(d):
    ops = build_basis(d).ops
    ker = np.einsum("mab,ncd->mnacbd", ops, np.swapaxes(ops, -1, -2))
    ker = ker.reshape(d * d, d * d, d * d, d * d) / d
    ker.setflags(write=False)
    return ker


def choi_matrices(transfers):
    """Choi matrices for a stack of transfer matrices ``(..., d**2, d**2)``."""
    transfers = np.asarray(transfers)
    d = _dim_from_size(transfers.shape[-1])
    return np.einsum("...mn,mnij->...ij", transfers, _choi_kernel(d))


def choi_from_transfer(t: TransferMatrix, basis: HermitianBasis = None) -> ChoiMatrix:
    """``C = (1/d) sum_{mu nu} T_{mu nu} lambda_mu (x) lambda_nu^T``."""
    if basis is not None and basis.dim != t.dim:
        raise DimensionMismatchError("basis dimension does not match the map")
    return ChoiMatrix(choi_matrices(t.matrix))


def transfer_from_choi(c: ChoiMatrix) -> TransferMatrix:
    """Inverse of :func:`choi_from_transfer`: ``T_{mu nu} = d Tr[C (lambda_mu (x) lambda_nu^T)]``."""
    d = c.dim
    ker = _choi_kernel(d)  # already carries the 1/d
    t = np.einsum("mnij,ji->mn", ker, c.matrix) * d * d
    return TransferMatrix(np.real(t))


def kraus_from_choi(c: ChoiMatrix, tol=DEFAULT_POLICY.psd) -> KrausSet:
    """Canonical Kraus operators from the eigenvectors of ``C``.

    ``C = (1/d) sum_ij E(|i><j|) (x) |i><j|``, so an eigenpair ``(p, u)``
    gives ``K = sqrt(d p) u`` reshaped to ``d x d``.
    """
    d = c.dim
    evals, vecs = np.linalg.eigh(c.matrix)
    evals = linalg.clamp_psd(evals, tol * max(1.0, float(np.max(np.abs(evals)))))
    keep = evals > tol
    ops = np.sqrt(d * evals[keep])[:, None, None] * vecs[:, keep].T.reshape(-1, d, d)
    return KrausSet(ops)


def choi_unital_reduced(a: AffineMap) -> ChoiMatrix:
    """Choi matrix of a unital map from ``M`` alone: ``(1 + d sum M lambda (x) lambda^T)/d^2``."""
    d = a.dim
    ops = build_basis(d).ops[1:]
    acc = np.einsum("mn,mab,ncd->acbd", a.m, ops, np.swapaxes(ops, -1, -2))
    acc = acc.reshape(d * d, d * d)
    return ChoiMatrix((np.eye(d * d) + d * acc) / d ** 2)


def is_unital(a: AffineMap, tol=DEFAULT_POLICY.structural) -> bool:
    return float(np.max(np.abs(a.c), initial=0.0)) <= tol


def choi_min_eigenvalue(c: ChoiMatrix) -> float:
    return float(linalg.eigvalsh(c.matrix)[0])


def is_cp(c: ChoiMatrix, tol=DEFAULT_POLICY.psd) -> bool:
    scale = max(1.0, float(np.linalg.norm(c.matrix, 2)))
    return choi_min_eigenvalue(c) >= -tol * scale


def trace_norm(h, policy=DEFAULT_POLICY) -> float:
    """``Tr|h|`` for Hermitian ``h``; non-Hermitian input is rejected."""
    return float(linalg.trace_norm(h, policy.structural))


def random_kraus(d: int, k: int, rng: np.random.Generator) -> KrausSet:
    """Random channel from the first ``d`` columns of a Haar-ish isometry (QR of Ginibre)."""
    g = rng.standard_normal((d * k, d)) + 1j * rng.standard_normal((d * k, d))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return KrausSet(q.reshape(k, d, d))


def evolve_bloch(transfers, bloch):
    """Apply a stack of transfer matrices ``(n, D, D)`` to Bloch vectors ``(..., D-1)``.

    Returns ``(n, ..., D-1)``.
    """
    transfers = np.asarray(transfers)
    d = _dim_from_size(transfers.shape[-1])
    bloch = np.asarray(bloch, dtype=float)
    m = transfers[:, 1:, 1:]
    c = transfers[:, 1:, 0] / np.sqrt(d)
    flat = bloch.reshape(-1, bloch.shape[-1])
    out = np.swapaxes(m @ flat.T, 1, 2) + c[:, None, :]
    return out.reshape((m.shape[0],) + bloch.shape)


def evolved_densities(transfers, bloch):
    transfers = np.asarray(transfers)
    basis = build_basis(_dim_from_size(transfers.shape[-1]))
    return density_matrices(evolve_bloch(transfers, bloch), basis)
