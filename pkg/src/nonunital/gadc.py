"""Generalized amplitude damping channel (GADC) and its time-dependent process.

The process uses ``p_t = cos^2(omega t)`` and ``eta_t = exp(-t)``. The
``oracle_*`` functions evaluate closed forms for this process directly from
the parameters; they share no code with the channel/distance pipeline so that
comparing the two is a real check.
"""
import math
from dataclasses import dataclass

import numpy as np

from .channels import AffineMap, KrausSet
from .errors import DomainError
from .processes import QuantumProcess


@dataclass(frozen=True)
class GadcParams:
    p: float
    eta: float

    def __post_init__(self):
        for name in ("p", "eta"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class GadcProcessParams:
    omega: float = 5.0

    def __post_init__(self):
        if not self.omega >= 0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")


def gadc_kraus(g: GadcParams) -> KrausSet:
    p, eta = g.p, g.eta
    sp, sq = math.sqrt(p), math.sqrt(1 - p)
    se, sd = math.sqrt(eta), math.sqrt(1 - eta)
    return KrausSet(np.array([
        sp * np.array([[1, 0], [0, se]]),
        sp * np.array([[0, sd], [0, 0]]),
        sq * np.array([[se, 0], [0, 1]]),
        sq * np.array([[0, 0], [sd, 0]]),
    ], dtype=complex))


def gadc_affine(g: GadcParams) -> AffineMap:
    """``M = diag(sqrt(eta), sqrt(eta), eta)``, ``c = (0, 0, (2p-1)(1-eta)/sqrt(2))``."""
    se = math.sqrt(g.eta)
    return AffineMap(np.diag([se, se, g.eta]),
                     np.array([0.0, 0.0, (2 * g.p - 1) * (1 - g.eta) / math.sqrt(2)]))


def _gadc_transfers(p, eta):
    n = p.shape[0]
    t = np.zeros((n, 4, 4))
    t[:, 0, 0] = 1.0
    t[:, 1, 1] = t[:, 2, 2] = np.sqrt(eta)
    t[:, 3, 3] = eta
    # sqrt(d) * c_z with d = 2
    t[:, 3, 0] = (2 * p - 1) * (1 - eta)
    return t


def gadc_process(gp: GadcProcessParams = GadcProcessParams(), fixed_p=None) -> QuantumProcess:
    """Process with ``E_t = GADC(cos^2(omega t), exp(-t))``.

    ``fixed_p`` replaces ``p_t`` by a constant (``0.5`` gives a unital process).
    """
    omega = gp.omega
    if fixed_p is not None and not 0.0 <= fixed_p <= 1.0:
        raise ValueError(f"fixed_p must lie in [0, 1], got {fixed_p}")

    def transfer_fn(times):
        p = np.cos(omega * times) ** 2 if fixed_p is None else np.full_like(times, fixed_p)
        return _gadc_transfers(p, np.exp(-times))

    label = f"gadc(omega={omega})" if fixed_p is None else f"gadc(omega={omega}, p={fixed_p})"
    return QuantumProcess(2, transfer_fn, "closed-form", label)


# -- closed-form oracles -----------------------------------------------------------

def oracle_w(gp: GadcProcessParams, t):
    """``W_t = (2 p_t - 1)(1 - eta_t) = cos(2 omega t)(1 - e^{-t})``."""
    t = np.asarray(t, dtype=float)
    return np.cos(2 * gp.omega * t) * (1 - np.exp(-t))


def _pauli_coords(rho):
    rho = np.asarray(rho)
    x = 2 * rho[0, 1].real
    y = -2 * rho[0, 1].imag
    z = (rho[0, 0] - rho[1, 1]).real
    return np.array([x, y, z]) / math.sqrt(2)


def oracle_trace_distance(gp: GadcProcessParams, rho1, rho2, t):
    """``e^{-t/2}/sqrt(2) * sqrt(x^2 + y^2 + e^{-t} z^2)`` with ``(x, y, z) = r(rho1) - r(rho2)``."""
    x, y, z = _pauli_coords(rho1) - _pauli_coords(rho2)
    t = np.asarray(t, dtype=float)
    return np.exp(-t / 2) / math.sqrt(2) * np.sqrt(x * x + y * y + np.exp(-t) * z * z)


def oracle_trajectory_distance(gp: GadcProcessParams, tau, t):
    """Trace distance between the evolved pair started from ``1/2`` and its trajectory state."""
    tau = np.asarray(tau, dtype=float)
    t = np.asarray(t, dtype=float)
    return np.exp(-t) / 2 * np.abs(np.cos(2 * gp.omega * tau)) * (1 - np.exp(-tau))


def oracle_fidelity(gp: GadcProcessParams, tau, t, tol=1e-12):
    """``F = (h_+ + h_-)/2`` with ``h_pm = sqrt((1 pm W_t)(1 pm W_t pm eta_t W_tau))``."""
    t = np.asarray(t, dtype=float)
    tau = np.asarray(tau, dtype=float)
    w_t = np.cos(2 * gp.omega * t) * (1 - np.exp(-t))
    w_tau = np.cos(2 * gp.omega * tau) * (1 - np.exp(-tau))
    shift = np.exp(-t) * w_tau
    rad_plus = (1 + w_t) * (1 + w_t + shift)
    rad_minus = (1 - w_t) * (1 - w_t - shift)
    if np.min(rad_plus) < -tol or np.min(rad_minus) < -tol:
        raise DomainError("fidelity radicand is negative")
    h_plus = np.sqrt(np.maximum(rad_plus, 0.0))
    h_minus = np.sqrt(np.maximum(rad_minus, 0.0))
    return 0.5 * (h_plus + h_minus)


def oracle_bures(gp: GadcProcessParams, tau, t):
    return np.sqrt(np.maximum(2 * (1 - oracle_fidelity(gp, tau, t)), 0.0))


def oracle_f(gp: GadcProcessParams, t):
    """``f(t) = -omega sin(2 omega t)(1 - e^{-t}) + cos^2(omega t)``."""
    t = np.asarray(t, dtype=float)
    w = gp.omega
    return -w * np.sin(2 * w * t) * (1 - np.exp(-t)) + np.cos(w * t) ** 2


def oracle_g(gp: GadcProcessParams, t):
    """``g(t) = (|1 - f| + |f| - 1)/2``; zero whenever ``0 <= f <= 1``."""
    f = oracle_f(gp, t)
    return 0.5 * (np.abs(1 - f) + np.abs(f) - 1)


def oracle_trajectory_purity(gp: GadcProcessParams, t):
    """Purity of ``E_t(1/2)``: ``(1 + W_t^2)/2``."""
    w = oracle_w(gp, t)
    return 0.5 * (1 + w * w)


def oracle_trajectory_purity_rate(gp: GadcProcessParams, t):
    """``d/dt (1 + W_t^2)/2 = W_t W_t'``."""
    t = np.asarray(t, dtype=float)
    om = gp.omega
    w = np.cos(2 * om * t) * (1 - np.exp(-t))
    dw = -2 * om * np.sin(2 * om * t) * (1 - np.exp(-t)) + np.cos(2 * om * t) * np.exp(-t)
    return w * dw
