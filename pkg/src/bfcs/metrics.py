"""Recovery quality metrics for an estimate ``e`` of a unit-norm signal ``x``."""
import math
from dataclasses import asdict, dataclass

import numpy as np

__all__ = ["MetricReport", "mae", "mse", "snr_db", "per", "age", "evaluate"]

# returned by snr_db for an exact reconstruction
SNR_EXACT = math.inf

_UNIT_TOL = 1e-9


def _pair(x, e):
    x = np.asarray(x, dtype=float)
    e = np.asarray(e, dtype=float)
    if x.shape != e.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {e.shape}")
    return x, e


def mae(x, e):
    x, e = _pair(x, e)
    return float(np.abs(x - e).sum() / x.size)


def mse(x, e):
    x, e = _pair(x, e)
    r = x - e
    return float(r @ r / x.size)


def snr_db(x, e):
    """``-10 log10 ||x - e||^2``; ``inf`` when ``e == x``."""
    x, e = _pair(x, e)
    r = x - e
    sq = float(r @ r)
    if sq == 0:
        return SNR_EXACT
    return -10.0 * math.log10(sq)


def per(x, e):
    """Fraction of positions where exactly one of ``x``, ``e`` is nonzero."""
    x, e = _pair(x, e)
    return float(np.count_nonzero((x != 0) != (e != 0)) / x.size)


def age(x, e):
    """Angle between unit vectors ``x`` and ``e``, as a fraction of pi."""
    x, e = _pair(x, e)
    for name, v in (("x", x), ("e", e)):
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > _UNIT_TOL:
            raise ValueError(f"{name} must have unit norm, got {nrm!r}")
    c = min(1.0, max(-1.0, float(x @ e)))
    return math.acos(c) / math.pi


@dataclass(frozen=True)
class MetricReport:
    mae: float
    mse: float
    snr_db: float
    per: float
    age: float

    def as_dict(self):
        return asdict(self)


def evaluate(x, e):
    return MetricReport(mae=mae(x, e), mse=mse(x, e), snr_db=snr_db(x, e), per=per(x, e), age=age(x, e))
