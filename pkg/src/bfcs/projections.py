"""Projections onto the sparse set, the 1D total-variation ball, the
nonnegative orthant and the unit sphere, plus the exact 1D TV prox."""
import numpy as np

from ._accel import njit

__all__ = [
    "DegenerateResultError",
    "TV_TOL",
    "tv",
    "hard_threshold",
    "tv_prox",
    "project_tv_ball",
    "project_nonneg",
    "normalize",
]

# absolute slack allowed on TV(P(v)) <= eps
TV_TOL = 1e-9
# bisection stops once the lambda bracket is this narrow relative to its top
_LAMBDA_RTOL = 1e-12


class DegenerateResultError(ArithmeticError):
    """Raised when a zero vector would have to be normalized."""


@njit
def _tv_kernel(v):
    s = 0.0
    for i in range(v.shape[0] - 1):
        s += abs(v[i + 1] - v[i])
    return s


@njit
def _fill(out, start, stop, value):
    # writes out[start], at least, then out[start+1 .. stop]
    out[start] = value
    for j in range(start + 1, stop + 1):
        out[j] = value
    return max(start, stop) + 1


@njit
def _taut_string(y, lam, out):
    # Condat's direct algorithm for min_x 0.5||x - y||^2 + lam * TV(x).
    # Segment bounds live in a small array: keeping them as scalars trips a
    # numba SSA miscompile across the jump branches.
    n = y.shape[0]
    k = 0
    k0 = 0
    kplus = 0
    kminus = 0
    minlam = -lam
    twolam = 2.0 * lam
    umin = lam
    umax = minlam
    v = np.empty(2)  # v[0] = lower bound, v[1] = upper bound of the segment value
    v[0] = y[0] - lam
    v[1] = y[0] + lam
    while True:
        if k == n - 1:
            # right boundary
            if umin < 0.0:
                k0 = _fill(out, k0, kminus, v[0])
                k = k0
                kminus = k0
                v[0] = y[k0]
                umin = lam
                umax = v[0] + umin - v[1]
            elif umax > 0.0:
                k0 = _fill(out, k0, kplus, v[1])
                k = k0
                kplus = k0
                v[1] = y[k0]
                umax = minlam
                umin = v[1] + umax - v[0]
            else:
                v[0] += umin / (k - k0 + 1)
                _fill(out, k0, k, v[0])
                return out
        else:
            umin += y[k + 1] - v[0]
            if umin < minlam:
                k0 = _fill(out, k0, kminus, v[0])
                k = k0
                kplus = k0
                kminus = k0
                v[0] = y[k0]
                v[1] = v[0] + twolam
                umin = lam
                umax = minlam
            else:
                umax += y[k + 1] - v[1]
                if umax > lam:
                    k0 = _fill(out, k0, kplus, v[1])
                    k = k0
                    kplus = k0
                    kminus = k0
                    v[1] = y[k0]
                    v[0] = v[1] - twolam
                    umin = lam
                    umax = minlam
                else:
                    k += 1
                    if umin >= lam:
                        kminus = k
                        v[0] += (umin - lam) / (kminus - k0 + 1)
                        umin = lam
                    if umax <= minlam:
                        kplus = k
                        v[1] += (umax + lam) / (kplus - k0 + 1)
                        umax = minlam


@njit
def _lambda_max(v):
    # smallest lam for which the prox is the constant mean vector
    n = v.shape[0]
    mean = 0.0
    for i in range(n):
        mean += v[i]
    mean /= n
    c = 0.0
    top = 0.0
    for i in range(n - 1):
        c += v[i] - mean
        if abs(c) > top:
            top = abs(c)
    return top


@njit
def _project_tv_ball_kernel(v, eps, tol, rtol, out):
    n = v.shape[0]
    buf = np.empty(n)
    lo = 0.0
    hi = _lambda_max(v)
    mean = 0.0
    for i in range(n):
        mean += v[i]
    mean /= n
    for i in range(n):
        out[i] = mean
    if hi == 0.0 or eps == 0.0:
        return out, hi
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        _taut_string(v, mid, buf)
        t = _tv_kernel(buf)
        if t > eps:
            lo = mid
        else:
            hi = mid
            for i in range(n):
                out[i] = buf[i]
            if eps - t <= tol:
                break
    return out, hi


def _as_vector(v):
    v = np.ascontiguousarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    return v


def _finite(v):
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def tv(v):
    """Total variation ``sum |v[i+1] - v[i]|``."""
    v = _as_vector(v)
    if v.size == 0:
        raise ValueError("total variation of an empty vector is undefined")
    return float(_tv_kernel(v))


def hard_threshold(v, K):
    """Keep the ``K`` largest-magnitude entries of ``v``, zero the rest.

    Ties in magnitude are broken in favour of the lower index.
    """
    v = _as_vector(v)
    K = int(K)
    if K < 0 or K > v.size:
        raise ValueError(f"sparsity K={K} outside [0, {v.size}]")
    keep = np.argsort(-np.abs(v), kind="stable")[:K]
    out = np.zeros_like(v)
    out[keep] = v[keep]
    return out


def tv_prox(v, lam):
    """Exact minimizer of ``0.5 ||u - v||^2 + lam * TV(u)`` (taut string)."""
    v = _as_vector(v)
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    _finite(v)
    if lam == 0 or v.size < 2:
        return v.copy()
    return _taut_string(v, float(lam), np.empty_like(v))


def project_tv_ball(v, eps, tol=TV_TOL):
    """Euclidean projection of ``v`` onto ``{u : TV(u) <= eps}``.

    The projection equals ``tv_prox(v, lam)`` for the smallest ``lam`` with
    ``TV <= eps``; ``lam`` is found by bisection on ``[0, lam_max]`` where
    ``lam_max`` is the threshold at which the prox collapses to the mean.
    The result always satisfies ``TV(u) <= eps`` up to rounding and ``eps - TV(u)
    <= tol`` unless the bracket shrank first.
    """
    v = _as_vector(v)
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    _finite(v)
    if v.size == 0:
        return v.copy()
    if _tv_kernel(v) <= eps:
        return v.copy()
    out, _ = _project_tv_ball_kernel(v, float(eps), float(tol), _LAMBDA_RTOL, np.empty_like(v))
    return out


def project_nonneg(v):
    return np.maximum(_as_vector(v), 0.0)


def normalize(v):
    """Scale ``v`` to unit Euclidean norm; zero vectors raise."""
    v = _as_vector(v)
    peak = np.max(np.abs(v)) if v.size else 0.0
    if peak == 0 or not np.isfinite(peak):
        raise DegenerateResultError(f"cannot normalize a vector with max |v| = {peak}")
    # pre-scaling keeps tiny or huge vectors from under/overflowing the norm
    w = v / peak
    return w / np.linalg.norm(w)
