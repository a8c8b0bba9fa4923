"""Derivatives and sign-segmented trapezoid integrals on sampled time series."""
import numpy as np


def central_derivative(y, t, axis=0):
    """Second-order central differences, one-sided at both ends."""
    return np.gradient(y, t, axis=axis, edge_order=1)


def _cell_areas(t, y):
    """Area of the positive part of the linear interpolant in each grid cell.

    ``y`` has time on axis 0; trailing axes are independent series.
    """
    h = np.diff(t).reshape((-1,) + (1,) * (y.ndim - 1))
    y0, y1 = y[:-1], y[1:]
    both = (y0 >= 0) & (y1 >= 0)
    denom = np.abs(y0 - y1)
    denom = np.where(denom > 0, denom, 1.0)
    # Sign change: only the triangle on the positive side of the crossing counts.
    down = (y0 > 0) & (y1 < 0)
    up = (y0 < 0) & (y1 > 0)
    area = np.where(both, 0.5 * h * (y0 + y1), 0.0)
    area = np.where(down, 0.5 * h * y0 ** 2 / denom, area)
    area = np.where(up, 0.5 * h * y1 ** 2 / denom, area)
    return area


def positive_part_integrals(t, y):
    """``int max(y, 0) dt`` for each column of ``y`` (time on axis 0)."""
    t = np.asarray(t, float)
    y = np.asarray(y, float)
    return np.sum(_cell_areas(t, y), axis=0)


def positive_segments(t, y):
    """Split ``int_{y>0} y dt`` into maximal positive segments.

    Returns a list of ``(start, end, integral)``; segment ends at sign changes
    are located by linear interpolation inside the cell.
    """
    t = np.asarray(t, float)
    y = np.asarray(y, float)
    areas = _cell_areas(t, y)
    segments = []
    current = None
    for i, area in enumerate(areas):
        y0, y1 = y[i], y[i + 1]
        if area <= 0:
            if current is not None:
                segments.append(tuple(current))
                current = None
            continue
        start = t[i]
        if y0 < 0:
            start = t[i] + (t[i + 1] - t[i]) * y0 / (y0 - y1)
        end = t[i + 1]
        if y1 < 0:
            end = t[i] + (t[i + 1] - t[i]) * y0 / (y0 - y1)
        if current is None:
            current = [start, end, 0.0]
        current[1] = end
        current[2] += float(area)
        if y1 <= 0:
            segments.append(tuple(current))
            current = None
    if current is not None:
        segments.append(tuple(current))
    return [(float(a), float(b), float(v)) for a, b, v in segments]


def _hermite(y0, y1, d0, d1, h, u):
    """Cubic Hermite interpolant on a cell of width ``h`` at fraction ``u``."""
    u2, u3 = u * u, u * u * u
    return ((2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * d0
            + (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * d1)


def _cell_rises(t, y, dy):
    """Increase of ``y`` over the part of each cell where ``dy > 0``.

    Inside a cell with ``dy >= 0`` at both ends the rise is ``y1 - y0``; where
    ``dy`` changes sign the crossing is located by linear interpolation and
    ``y`` there comes from the cubic Hermite interpolant. Cells never
    contribute a negative amount.
    """
    h = np.diff(t).reshape((-1,) + (1,) * (y.ndim - 1))
    y0, y1, d0, d1 = y[:-1], y[1:], dy[:-1], dy[1:]
    denom = np.where(d0 != d1, d0 - d1, 1.0)
    u = np.clip(d0 / denom, 0.0, 1.0)
    mid = _hermite(y0, y1, d0, d1, h, u)
    rise = np.where((d0 >= 0) & (d1 >= 0) & ((d0 > 0) | (d1 > 0)), y1 - y0, 0.0)
    rise = np.where((d0 > 0) & (d1 < 0), mid - y0, rise)
    rise = np.where((d0 < 0) & (d1 > 0), y1 - mid, rise)
    return np.maximum(rise, 0.0)


def rise_totals(t, y, dy):
    """``int_{dy > 0} dy dt`` as the total rise of ``y``, per column (time on axis 0).

    ``dy`` must be the time derivative of ``y`` at the same samples.
    """
    t = np.asarray(t, float)
    return np.sum(_cell_rises(t, np.asarray(y, float), np.asarray(dy, float)), axis=0)


def rising_segments(t, y, dy):
    """Maximal intervals with ``dy > 0`` as ``(start, end, rise of y)`` triples."""
    t = np.asarray(t, float)
    y = np.asarray(y, float)
    dy = np.asarray(dy, float)
    rises = _cell_rises(t, y, dy)
    segments = []
    current = None
    for i, rise in enumerate(rises):
        d0, d1 = dy[i], dy[i + 1]
        if not (d0 > 0 or d1 > 0):
            if current is not None:
                segments.append(tuple(current))
                current = None
            continue
        cross = t[i] + (t[i + 1] - t[i]) * d0 / (d0 - d1) if (d0 > 0) != (d1 > 0) else None
        start = cross if d0 <= 0 else t[i]
        end = cross if d1 <= 0 else t[i + 1]
        if current is None:
            current = [start, end, 0.0]
        current[1] = end
        current[2] += float(rise)
        if d1 <= 0:
            segments.append(tuple(current))
            current = None
    if current is not None:
        segments.append(tuple(current))
    return [(float(a), float(b), float(v)) for a, b, v in segments if v > 0 or b > a]


def trapezoid(y, t):
    return float(np.trapezoid(y, t))
