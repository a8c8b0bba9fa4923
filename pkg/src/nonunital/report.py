"""Result record shared by all measures."""
from dataclasses import dataclass, field

import numpy as np

from .quadrature import positive_segments, rising_segments


@dataclass
class MeasureReport:
    """Value of one measure with its per-interval breakdown.

    ``contributions`` are ``(start, end, integral)`` triples whose integrals
    sum to ``value``. ``maximizer`` describes the argmax (state pair, initial
    state or trajectory time). ``trace`` holds sampled curves for plotting.
    """

    name: str
    value: float
    contributions: list = field(default_factory=list)
    maximizer: dict = field(default_factory=dict)
    trace: dict = field(default_factory=dict)
    caveats: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @classmethod
    def from_integrand(cls, name, t, integrand, **kwargs):
        segments = positive_segments(t, integrand)
        value = float(sum(v for _, _, v in segments))
        return cls(name=name, value=value, contributions=segments, **kwargs)

    @classmethod
    def from_rises(cls, name, t, y, dy, **kwargs):
        """Value is the total rise of ``y`` over the intervals where ``dy > 0``."""
        segments = rising_segments(t, y, dy)
        value = float(sum(v for _, _, v in segments))
        return cls(name=name, value=value, contributions=segments, **kwargs)

    def to_dict(self, include_trace=False):
        out = {
            "name": self.name,
            "value": self.value,
            "contributions": [list(c) for c in self.contributions],
            "maximizer": _jsonable(self.maximizer),
            "caveats": list(self.caveats),
            "details": _jsonable(self.details),
        }
        if include_trace:
            out["trace"] = _jsonable(self.trace)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj
