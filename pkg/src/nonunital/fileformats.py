"""JSON readers and writers for tabulated channels and processes.

Channel file: ``{"dim": d, "rows": [[...], ...]}``, the d^2 x d^2 transfer
matrix row by row.

Process file: ``{"dim": d, "times": [0, t_1, ...], "transfers": [T_0, T_1, ...]}``
with each ``T_i`` in the same row-major nested-list layout.
"""
import json

import numpy as np

from .channels import TransferMatrix
from .errors import InputFormatError
from .policy import DEFAULT_POLICY
from .processes import QuantumProcess, tabulated_process


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: not valid JSON ({exc})") from exc


def _field(obj, key, path):
    if not isinstance(obj, dict) or key not in obj:
        raise InputFormatError(f"{path}: missing field {key!r}")
    return obj[key]


def _dim(obj, path):
    d = _field(obj, "dim", path)
    if isinstance(d, bool) or not isinstance(d, int) or d < 2:
        raise InputFormatError(f"{path}: dim must be an integer >= 2, got {d!r}")
    return d


def _matrix(rows, d, what):
    try:
        m = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputFormatError(f"{what}: entries must be real numbers") from exc
    if m.shape != (d * d, d * d):
        raise InputFormatError(f"{what}: expected a {d * d}x{d * d} matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputFormatError(f"{what}: non-finite entries")
    return m


def load_channel(path, policy=DEFAULT_POLICY) -> TransferMatrix:
    obj = _read_json(path)
    d = _dim(obj, path)
    m = _matrix(_field(obj, "rows", path), d, path)
    e0 = np.zeros(d * d)
    e0[0] = 1.0
    err = float(np.max(np.abs(m[0] - e0)))
    if err > policy.file_tp:
        raise InputFormatError(
            f"{path}: first row must be (1, 0, ..., 0) for a trace-preserving map "
            f"(deviation {err:.3e})")
    return TransferMatrix(m)


def load_process(path, policy=DEFAULT_POLICY) -> QuantumProcess:
    """Read and validate a tabulated process (identity at t=0, TP and CP at every sample)."""
    obj = _read_json(path)
    d = _dim(obj, path)
    try:
        times = np.array(_field(obj, "times", path), dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputFormatError(f"{path}: times must be a list of numbers") from exc
    raw = _field(obj, "transfers", path)
    if times.ndim != 1 or not isinstance(raw, list) or len(raw) != times.shape[0]:
        raise InputFormatError(f"{path}: need one transfer matrix per sample time")
    transfers = np.array([_matrix(r, d, f"{path}: transfer at t={t}")
                          for t, r in zip(times, raw)])
    return tabulated_process(times, transfers, label=str(path), policy=policy)


def dump_channel(t: TransferMatrix, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"dim": t.dim, "rows": np.asarray(t.matrix).tolist()}, fh)


def dump_process(times, transfers, path):
    transfers = np.asarray(transfers, dtype=float)
    d = int(round(np.sqrt(transfers.shape[1])))
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"dim": d, "times": np.asarray(times, dtype=float).tolist(),
                   "transfers": transfers.tolist()}, fh)
