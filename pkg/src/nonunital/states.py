"""Density operators in generalized Bloch coordinates."""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import DimensionMismatchError, NotAStateError, NotHermitianError, NotPSDError
from .operator_basis import HermitianBasis, build_basis, expand
from .policy import DEFAULT_POLICY


@dataclass(frozen=True, eq=False)
class BlochState:
    """A density operator ``1/d + r . lambda`` stored by its Bloch vector ``r``.

    The coordinate ``r_0 = 1/sqrt(d)`` is implied by unit trace and never stored.
    """

    dim: int
    bloch: np.ndarray

    def __post_init__(self):
        arr = np.array(self.bloch, dtype=float)
        if arr.shape != (self.dim ** 2 - 1,):
            raise DimensionMismatchError(
                f"Bloch vector for d={self.dim} needs {self.dim ** 2 - 1} entries, "
                f"got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "bloch", arr)

    @property
    def coords(self):
        """Full coordinate vector ``(r_0, r)``."""
        return np.concatenate([[1 / np.sqrt(self.dim)], self.bloch])

    def min_eigenvalue(self):
        return float(linalg.eigvalsh(density_matrices(self.bloch, build_basis(self.dim)))[0])

    def is_valid(self, tol=DEFAULT_POLICY.psd):
        return self.min_eigenvalue() >= -tol


def maximally_mixed(d: int) -> BlochState:
    return BlochState(d, np.zeros(d * d - 1))


@lru_cache(maxsize=None)
def _interleaved_ops(d):
    # Real (d**2-1, 2 d**2) matrix whose rows view as the complex lambda_k (k >= 1),
    # plus the identity/d term in the same interleaved layout.
    ops = np.ascontiguousarray(build_basis(d).ops[1:].reshape(d * d - 1, d * d))
    out = ops.view(float).copy()
    out.setflags(write=False)
    offset = (np.eye(d, dtype=complex) / d).reshape(-1).view(float).copy()
    offset.setflags(write=False)
    return out, offset


def density_matrices(bloch, basis: HermitianBasis):
    """``1/d + r . lambda`` for a Bloch vector or a stack of them (no validation)."""
    bloch = np.asarray(bloch, dtype=float)
    d = basis.dim
    ops, offset = _interleaved_ops(d)
    out = (bloch @ ops + offset).view(complex)
    return out.reshape(bloch.shape[:-1] + (d, d))


def validate_density(rho, policy=DEFAULT_POLICY):
    """Raise :class:`NotAStateError` unless ``rho`` is a density operator."""
    rho = np.asarray(rho)
    try:
        linalg.check_hermitian(rho, policy.structural)
    except NotHermitianError as exc:
        raise NotAStateError(str(exc)) from exc
    tr = np.trace(rho, axis1=-2, axis2=-1).real
    if np.max(np.abs(tr - 1.0)) > policy.trace:
        raise NotAStateError(f"trace is {np.ravel(tr)[0]!r}, not 1")
    lowest = float(np.min(linalg.eigvalsh(rho)))
    if lowest < -policy.psd:
        raise NotAStateError(f"negative eigenvalue {lowest:.3e}")


def bloch_from_density(rho, basis: HermitianBasis, policy=DEFAULT_POLICY) -> BlochState:
    rho = np.asarray(rho)
    if rho.shape != (basis.dim, basis.dim):
        raise DimensionMismatchError(f"expected a {basis.dim}x{basis.dim} matrix")
    validate_density(rho, policy)
    r = expand(0.5 * (rho + rho.conj().T), basis)
    return BlochState(basis.dim, np.real(r[1:]))


def density_from_bloch(s: BlochState, basis: HermitianBasis, policy=DEFAULT_POLICY):
    if s.dim != basis.dim:
        raise DimensionMismatchError(f"state has d={s.dim}, basis has d={basis.dim}")
    rho = density_matrices(s.bloch, basis)
    lowest = float(linalg.eigvalsh(rho)[0])
    if lowest < -policy.psd:
        raise NotAStateError(f"Bloch vector lies outside the state space "
                             f"(eigenvalue {lowest:.3e})")
    return rho


def purity(rho, check=True, policy=DEFAULT_POLICY):
    """``Tr(rho^2)``; vectorized over leading axes.

    With ``check`` the input is first validated as a density operator.
    """
    rho = np.asarray(rho)
    if check:
        validate_density(rho, policy)
    return np.sum(np.abs(rho) ** 2, axis=(-2, -1))


def random_state(d: int, rng: np.random.Generator):
    """Full-rank density matrix ``G G^dag / Tr(G G^dag)`` from a complex Ginibre ``G``."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_state(d: int, rng: np.random.Generator):
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def pure_bloch(theta, phi):
    """Qubit Bloch vector of the pure state at polar angles ``(theta, phi)``.

    Broadcasts over array arguments; pure states sit at radius ``1/sqrt(2)``.
    """
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    n = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)],
                 axis=-1)
    return n / np.sqrt(2)


def is_state(rho, policy=DEFAULT_POLICY):
    try:
        validate_density(rho, policy)
    except (NotAStateError, NotPSDError):
        return False
    return True
