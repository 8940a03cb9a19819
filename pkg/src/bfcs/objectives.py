"""One-sided data-fidelity terms on ``y * (A x)`` and their subgradients."""
import enum

import numpy as np

from .sensing import sign_vector

__all__ = [
    "ObjectiveKind",
    "negative_part",
    "objective_value",
    "subgradient",
    "consistency_hamming",
]


class ObjectiveKind(str, enum.Enum):
    ONE_SIDED_L1 = "l1"
    ONE_SIDED_L2 = "l2"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip()
        for kind in cls:
            if key.lower() == kind.value or key.upper() == kind.name:
                return kind
        raise ValueError(f"unknown objective {value!r}; expected 'l1' or 'l2'")


def negative_part(z):
    return np.minimum(np.asarray(z, dtype=float), 0.0)


def _check(A, y, x):
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if A.ndim != 2 or A.shape != (y.shape[0], x.shape[0]):
        raise ValueError(
            f"dimension mismatch: A is {A.shape}, y has length {y.shape[0]}, "
            f"x has length {x.shape[0]}"
        )
    return A, y, x


def _value_from_margin(kind, yz):
    neg = negative_part(yz)
    if kind is ObjectiveKind.ONE_SIDED_L1:
        return float(-2.0 * neg.sum())
    return float(0.5 * neg @ neg)


def _subgradient_from_product(kind, A, y, Ax):
    if kind is ObjectiveKind.ONE_SIDED_L1:
        return A.T @ (sign_vector(Ax) - y)
    # (YA)^T (YAx)_- == A^T (y * (y*Ax)_-)
    return A.T @ (y * negative_part(y * Ax))


def objective_value(kind, A, y, x):
    """``2 ||(y*Ax)_-||_1`` (l1) or ``0.5 ||(y*Ax)_-||_2^2`` (l2)."""
    kind = ObjectiveKind.parse(kind)
    A, y, x = _check(A, y, x)
    return _value_from_margin(kind, y * (A @ x))


def subgradient(kind, A, y, x):
    """Subgradient of the one-sided objective with respect to ``x``.

    l1: ``A^T (sign(Ax) - y)``; l2: ``(YA)^T (YAx)_-`` with ``Y = diag(y)``.
    At kinks these formulas are used as-is, with ``sign(0) = -1``.
    """
    kind = ObjectiveKind.parse(kind)
    A, y, x = _check(A, y, x)
    return _subgradient_from_product(kind, A, y, A @ x)


def consistency_hamming(y, A, x):
    """Number of measurements whose sign disagrees with ``sign(A x)``."""
    A, y, x = _check(A, y, x)
    return int(np.count_nonzero(sign_vector(A @ x) != y))
