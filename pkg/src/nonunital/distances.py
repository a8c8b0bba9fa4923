"""Distances and fidelity between density operators.

All functions broadcast over leading axes, so ``rho1`` and ``rho2`` may be
stacks ``(..., d, d)``. Scalars come back as Python floats.

Square roots and logarithms go through :mod:`nonunital.linalg`; eigenvalues in
``[-1e-10, 0)`` are clamped to zero, anything lower raises
:class:`~nonunital.errors.NotAStateError`.

The Bures distance is evaluated as ``||sqrt(rho1) - sqrt(rho2) W||_F`` with
``W`` the unitary polar factor of ``sqrt(rho2) sqrt(rho1)``. That equals
``sqrt(2 (1 - F))`` exactly but does not lose digits when ``F`` is close to 1,
which matters when differentiating the distance in time.
"""
import math

import numpy as np

from . import linalg
from .errors import DimensionMismatchError, NotAStateError, NotPSDError
from .policy import DEFAULT_POLICY


def _pair(rho1, rho2):
    rho1 = np.asarray(rho1)
    rho2 = np.asarray(rho2)
    if rho1.shape[-2:] != rho2.shape[-2:]:
        raise DimensionMismatchError(f"shapes {rho1.shape} and {rho2.shape} differ")
    return rho1, rho2


def _out(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _sqrt_state(rho, tol):
    try:
        return linalg.psd_sqrt(rho, tol)
    except NotPSDError as exc:
        raise NotAStateError(str(exc)) from exc


def trace_distance(rho1, rho2, policy=DEFAULT_POLICY):
    """``(1/2) Tr|rho1 - rho2|``."""
    rho1, rho2 = _pair(rho1, rho2)
    return _out(0.5 * linalg.trace_norm(rho1 - rho2, check=False))


def fidelity(rho1, rho2, policy=DEFAULT_POLICY):
    """Uhlmann fidelity ``Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))`` (not squared)."""
    rho1, rho2 = _pair(rho1, rho2)
    a = _sqrt_state(rho1, policy.psd)
    _sqrt_state(rho2, policy.psd)
    k = linalg.matmul(linalg.matmul(a, rho2), a)
    k = 0.5 * (k + linalg.dagger(k))
    evals = linalg.clamp_psd(linalg.eigvalsh(k), policy.psd)
    return _out(np.sum(np.sqrt(evals), axis=-1))


def bures_distance_squared(rho1, rho2, policy=DEFAULT_POLICY):
    """``2 (1 - F)`` evaluated without cancellation."""
    rho1, rho2 = _pair(rho1, rho2)
    a = _sqrt_state(rho1, policy.psd)
    b = _sqrt_state(rho2, policy.psd)
    w = linalg.polar_unitary(linalg.matmul(b, a))
    diff = a - linalg.matmul(b, w)
    return _out(np.sum(np.abs(diff) ** 2, axis=(-2, -1)))


def bures_distance(rho1, rho2, policy=DEFAULT_POLICY):
    """``sqrt(2 (1 - F))``, in ``[0, sqrt(2)]``."""
    return _out(np.sqrt(bures_distance_squared(rho1, rho2, policy)))


def one_minus_fidelity(rho1, rho2, policy=DEFAULT_POLICY):
    return _out(0.5 * np.asarray(bures_distance_squared(rho1, rho2, policy)))


def hellinger_distance(rho1, rho2, policy=DEFAULT_POLICY):
    """``sqrt(2 (1 - Tr sqrt(rho1) sqrt(rho2)))``, computed as ``||sqrt(rho1) - sqrt(rho2)||_F``."""
    rho1, rho2 = _pair(rho1, rho2)
    diff = _sqrt_state(rho1, policy.psd) - _sqrt_state(rho2, policy.psd)
    return _out(np.sqrt(np.sum(np.abs(diff) ** 2, axis=(-2, -1))))


def relative_entropy(rho1, rho2, policy=DEFAULT_POLICY):
    """``Tr[rho1 (ln rho1 - ln rho2)]`` in nats; ``math.inf`` if supp(rho1) is not in supp(rho2)."""
    rho1, rho2 = _pair(rho1, rho2)
    p, _ = linalg.eigh(rho1)
    q, v = linalg.eigh(rho2)
    try:
        p = linalg.clamp_psd(p, policy.psd)
        q = linalg.clamp_psd(q, policy.psd)
    except NotPSDError as exc:
        raise NotAStateError(str(exc)) from exc
    safe_p = np.where(p > 0, p, 1.0)
    neg_entropy = np.sum(np.where(p > 0, p * np.log(safe_p), 0.0), axis=-1)
    # <v_j| rho1 |v_j> for each eigenvector v_j of rho2
    overlap = np.einsum("...ij,...ik,...kj->...j", np.conj(v), rho1, v).real
    outside = q < policy.support
    singular = np.any(outside & (overlap > policy.overlap), axis=-1)
    safe_q = np.where(outside, 1.0, q)
    cross = np.sum(np.where(outside, 0.0, overlap * np.log(safe_q)), axis=-1)
    value = np.where(singular, math.inf, np.maximum(neg_entropy - cross, 0.0))
    return _out(value)


def symmetric_relative_entropy(rho1, rho2, policy=DEFAULT_POLICY):
    return _out(np.asarray(relative_entropy(rho1, rho2, policy))
                + np.asarray(relative_entropy(rho2, rho1, policy)))


def qubit_bures_squared(r1, r2, policy=DEFAULT_POLICY):
    """Bures distance squared between qubit states given by Bloch vectors.

    ``r1, r2`` have shape ``(..., 3)`` in the ``sigma / sqrt(2)`` basis. With
    ``a = sqrt(2) r1``, ``b = sqrt(2) r2`` and ``e = b - a``,

        1 - F^2 = (1/2) [(1 - |a|^2) |e|^2 + (a.e)^2] / [1 - a.b + sqrt((1 - |a|^2)(1 - |b|^2))]

    and ``2 (1 - F) = 2 (1 - F^2) / (1 + F)``. Every term is non-negative, so
    nothing cancels as the states approach each other. Agrees with
    :func:`bures_distance_squared` to rounding.
    """
    a = math.sqrt(2.0) * np.asarray(r1, dtype=float)
    b = math.sqrt(2.0) * np.asarray(r2, dtype=float)
    e = b - a
    na = 1.0 - np.sum(a * a, axis=-1)
    nb = 1.0 - np.sum(b * b, axis=-1)
    lowest = float(np.min(np.minimum(na, nb)))
    if lowest < -2 * policy.psd:
        raise NotAStateError(f"Bloch vector outside the state space (1 - |a|^2 = {lowest:.3e})")
    na = np.maximum(na, 0.0)
    nb = np.maximum(nb, 0.0)
    num = na * np.sum(e * e, axis=-1) + np.sum(a * e, axis=-1) ** 2
    den = 1.0 - np.sum(a * b, axis=-1) + np.sqrt(na * nb)
    # den vanishes only for identical pure states, where num does too
    gap = np.where(den > 0, 0.5 * num / np.where(den > 0, den, 1.0), 0.0)
    f = np.sqrt(np.maximum(1.0 - gap, 0.0))
    return _out(2.0 * gap / (1.0 + f))


#: Bloch-vector forms of the Bures family for qubits, used by the large sweeps.
QUBIT_BLOCH_DISTANCES = {
    "bures": lambda r1, r2: np.sqrt(qubit_bures_squared(r1, r2)),
    "bures-sq": qubit_bures_squared,
    "fidelity": lambda r1, r2: 0.5 * np.asarray(qubit_bures_squared(r1, r2)),
}

#: Distances selectable for the non-unital non-Markovianity measure.
DISTANCES = {
    "bures": bures_distance,
    "bures-sq": bures_distance_squared,
    "fidelity": one_minus_fidelity,
    "hellinger": hellinger_distance,
    "sym-rel-ent": symmetric_relative_entropy,
}

#: Not offered to users: the trace distance ignores the non-unital part of the map.
VERIFICATION_DISTANCES = {"trace": trace_distance}


def get_distance(name):
    try:
        return {**DISTANCES, **VERIFICATION_DISTANCES}[name]
    except KeyError:
        raise ValueError(f"unknown distance {name!r}; choose from {sorted(DISTANCES)}") from None
