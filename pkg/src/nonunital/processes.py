"""Time-parameterized channel families ``t -> E_{t,0}`` and the divisibility witness g(t)."""
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .channels import TransferMatrix, choi_matrices
from .errors import (DimensionMismatchError, NonInvertibleProcessError,
                     NotCompletelyPositiveError, NotTracePreservingError)
from .policy import DEFAULT_POLICY
from .quadrature import trapezoid
from .report import MeasureReport


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``0 = t_0 < ... < t_{n-1} = t_max``."""

    t_max: float = 20.0
    n: int = 4001

    def __post_init__(self):
        if not self.t_max > 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"grid needs n >= 2 samples, got {self.n}")

    @property
    def points(self):
        return np.linspace(0.0, self.t_max, int(self.n))

    @property
    def h(self):
        return self.t_max / (self.n - 1)


@dataclass(frozen=True, eq=False)
class QuantumProcess:
    """A family of channels ``E_t := E_{t,0}``.

    ``transfer_fn`` maps a 1-d array of times to the stacked transfer matrices
    ``(n, d**2, d**2)``.
    """

    dim: int
    transfer_fn: Callable[[np.ndarray], np.ndarray]
    kind: str = "closed-form"
    label: str = ""
    t_end: float = np.inf  # last time at which the process is defined

    def transfers(self, times):
        times = np.atleast_1d(np.asarray(times, dtype=float))
        if np.any(times < 0):
            raise ValueError("process times must be >= 0")
        out = np.asarray(self.transfer_fn(times), dtype=float)
        d2 = self.dim ** 2
        if out.shape != (times.shape[0], d2, d2):
            raise DimensionMismatchError(
                f"process returned shape {out.shape}, expected {(times.shape[0], d2, d2)}")
        return out

    def eval(self, t) -> TransferMatrix:
        return TransferMatrix(self.transfers([t])[0])


def transfer_derivatives(process: QuantumProcess, times, step=1e-5):
    """``dT/dt`` by central differences of width ``2 step`` (second-order one-sided at t=0)."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    out = np.empty((times.shape[0],) + (process.dim ** 2,) * 2)
    edge = times < step
    inner = ~edge
    if np.any(inner):
        ti = times[inner]
        out[inner] = (process.transfers(ti + step) - process.transfers(ti - step)) / (2 * step)
    if np.any(edge):
        te = times[edge]
        out[edge] = (-3 * process.transfers(te) + 4 * process.transfers(te + step)
                     - process.transfers(te + 2 * step)) / (2 * step)
    return out


def closed_form_process(dim, transfer_fn, label="") -> QuantumProcess:
    return QuantumProcess(dim, transfer_fn, "closed-form", label)


def tabulated_process(times, transfers, label="tabulated", policy=DEFAULT_POLICY,
                      validate=True) -> QuantumProcess:
    """Process interpolated entrywise (linearly) between sampled transfer matrices.

    Samples must start at ``t = 0`` with the identity map, be trace preserving and
    completely positive. Queries up to one sampling step past the last time are
    extrapolated from the final segment; anything later is an error.
    """
    times = np.array(times, dtype=float)
    transfers = np.array(transfers, dtype=float)
    if times.ndim != 1 or times.shape[0] < 2:
        raise ValueError("need at least two sample times")
    if transfers.ndim != 3 or transfers.shape[0] != times.shape[0] \
            or transfers.shape[1] != transfers.shape[2]:
        raise DimensionMismatchError(
            f"transfers shape {transfers.shape} does not match {times.shape[0]} times")
    d = int(round(np.sqrt(transfers.shape[1])))
    if d * d != transfers.shape[1] or d < 2:
        raise DimensionMismatchError(f"{transfers.shape[1]} is not d**2 for d >= 2")
    if times[0] != 0.0:
        raise ValueError(f"first sample time must be 0, got {times[0]}")
    if np.any(np.diff(times) <= 0):
        raise ValueError("sample times must be strictly increasing")
    if validate:
        validate_transfers(times, transfers, policy)
    times.setflags(write=False)
    transfers.setflags(write=False)
    last_step = times[-1] - times[-2]

    def transfer_fn(ts):
        if np.any(ts > times[-1] + last_step):
            raise ValueError(f"time {ts.max()} is beyond the tabulated range [0, {times[-1]}]")
        idx = np.clip(np.searchsorted(times, ts, side="right") - 1, 0, len(times) - 2)
        w = ((ts - times[idx]) / (times[idx + 1] - times[idx]))[:, None, None]
        return (1 - w) * transfers[idx] + w * transfers[idx + 1]

    return QuantumProcess(d, transfer_fn, "tabulated", label, float(times[-1]))


def validate_transfers(times, transfers, policy=DEFAULT_POLICY):
    """Check identity at t=0, trace preservation and complete positivity of every sample."""
    n = transfers.shape[1]
    err0 = float(np.max(np.abs(transfers[0] - np.eye(n))))
    if err0 > policy.file_tp:
        raise ValueError(f"transfer matrix at t=0 is not the identity (deviation {err0:.3e})")
    e0 = np.zeros(n)
    e0[0] = 1.0
    row_err = np.max(np.abs(transfers[:, 0, :] - e0), axis=1)
    bad = np.flatnonzero(row_err > policy.file_tp)
    if bad.size:
        i = bad[0]
        raise NotTracePreservingError(
            f"transfer matrix at t={times[i]} is not trace preserving "
            f"(first row deviates by {row_err[i]:.3e})")
    chois = choi_matrices(transfers)
    lowest = linalg.eigvalsh(chois)[:, 0]
    scale = np.maximum(1.0, np.linalg.norm(chois, 2, axis=(1, 2)))
    bad = np.flatnonzero(lowest < -policy.psd * scale)
    if bad.size:
        i = bad[0]
        raise NotCompletelyPositiveError(
            f"map at t={times[i]} is not completely positive "
            f"(Choi eigenvalue {lowest[i]:.3e})", time=float(times[i]))


def tabulate(process: QuantumProcess, times, label=None) -> QuantumProcess:
    times = np.asarray(times, dtype=float)
    return tabulated_process(times, process.transfers(times),
                             label=label or f"tabulated {process.label}".strip())


def _checked_inverse_solve(t1s, base, targets, policy):
    cond = np.linalg.cond(base)
    bad = np.flatnonzero(~np.isfinite(cond) | (cond > policy.max_condition))
    if bad.size:
        i = bad[0]
        raise NonInvertibleProcessError(
            f"T(E_(t,0)) at t={t1s[i]} is not invertible (condition number {cond[i]:.3e})",
            time=float(t1s[i]), condition=float(cond[i]))
    # X base = target  <=>  base^T X^T = target^T
    return np.swapaxes(np.linalg.solve(np.swapaxes(base, -1, -2),
                                       np.swapaxes(targets, -1, -2)), -1, -2)


def intermediate_maps(process: QuantumProcess, t1s, t2s, policy=DEFAULT_POLICY):
    """Stacked ``T(E_{t2,0}) T(E_{t1,0})^{-1}`` for paired arrays of times."""
    t1s = np.atleast_1d(np.asarray(t1s, dtype=float))
    t2s = np.atleast_1d(np.asarray(t2s, dtype=float))
    if np.any(t2s < t1s):
        raise ValueError("intermediate maps need t1 <= t2")
    return _checked_inverse_solve(t1s, process.transfers(t1s), process.transfers(t2s), policy)


def intermediate_map(process: QuantumProcess, t1, t2, policy=DEFAULT_POLICY) -> TransferMatrix:
    """Transfer matrix of ``E_{t2,t1}`` from the composition law ``E_{t2,0} = E_{t2,t1} o E_{t1,0}``.

    The result is trace preserving but need not be completely positive.
    """
    if not 0 <= t1 <= t2:
        raise ValueError(f"need 0 <= t1 <= t2, got t1={t1}, t2={t2}")
    return TransferMatrix(intermediate_maps(process, [t1], [t2], policy)[0])


def _g_difference_quotients(process, times, eps, policy):
    base = process.transfers(times)
    out = []
    for step in (eps, eps / 2):
        target = process.transfers(times + step)
        maps = _checked_inverse_solve(times, base, target, policy)
        chois = choi_matrices(maps)
        chois = 0.5 * (chois + linalg.dagger(chois))
        excess = linalg.trace_norm(chois, check=False) - 1.0
        out.append(excess / step)
    return out


def rhp_g_trace(process: QuantumProcess, times, eps=1e-5, policy=DEFAULT_POLICY):
    """g(t) on an array of times.

    ``(Tr|C(E_{t+eps,t})| - 1)/eps`` with one Richardson step over ``eps`` and
    ``eps/2``; results are clipped at zero since ``Tr|C| >= Tr C = 1``.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    g_full, g_half = _g_difference_quotients(process, times, eps, policy)
    return np.maximum(2.0 * g_half - g_full, 0.0)


def rhp_g(process: QuantumProcess, t, eps=1e-5, policy=DEFAULT_POLICY) -> float:
    return float(rhp_g_trace(process, [t], eps, policy)[0])


def rhp_measure(process: QuantumProcess, grid: TimeGrid, eps=1e-5,
                policy=DEFAULT_POLICY) -> MeasureReport:
    """Trapezoid integral of g(t) over ``[0, t_max]``."""
    t = grid.points
    g = rhp_g_trace(process, t, eps, policy)
    report = MeasureReport.from_integrand(
        "rhp", t, g,
        trace={"t": t, "g": g},
        caveats=[f"integral truncated at t_max={grid.t_max}",
                 f"g(t) from finite differences with eps={eps} and one Richardson step"],
        details={"eps": eps, "trapezoid": trapezoid(g, t)},
    )
    return report
