"""Independent reference computations used only by the tests.

None of these share code with the package: the TV problems go through a
generic QP solver (cvxopt), the sparse projection through exhaustive support
enumeration, and gradients through central differences.
"""
import itertools

import numpy as np

cvxopt = None


def _qp(P, q, G, h):
    global cvxopt
    if cvxopt is None:
        import cvxopt as _c

        _c.solvers.options.update(show_progress=False, abstol=1e-10, reltol=1e-10, feastol=1e-10, maxiters=200)
        cvxopt = _c
    m = cvxopt.matrix
    sol = cvxopt.solvers.qp(m(P), m(q), m(G), m(h))
    assert sol["status"] == "optimal", sol["status"]
    return np.array(sol["x"]).ravel()


def tv_ball_projection_qp(v, eps):
    """argmin_u 0.5||u - v||^2 s.t. sum |u[i+1]-u[i]| <= eps, via slack variables."""
    v = np.asarray(v, dtype=float)
    n = v.size
    if n == 1:
        return v.copy()
    N = 2 * n - 1
    P = np.zeros((N, N))
    P[:n, :n] = np.eye(n)
    P[n:, n:] = 1e-14 * np.eye(n - 1)
    q = np.concatenate([-v, np.zeros(n - 1)])
    D = np.diff(np.eye(n), axis=0)
    rows = []
    for i in range(n - 1):
        e = np.zeros(n - 1)
        e[i] = -1.0
        rows.append(np.concatenate([D[i], e]))
        rows.append(np.concatenate([-D[i], e]))
    rows.append(np.concatenate([np.zeros(n), np.ones(n - 1)]))
    h = np.zeros(len(rows))
    h[-1] = eps
    return _qp(P, q, np.array(rows), h)[:n]


def tv_prox_qp(v, lam):
    """argmin_u 0.5||u - v||^2 + lam * TV(u), via slack variables."""
    v = np.asarray(v, dtype=float)
    n = v.size
    if n == 1:
        return v.copy()
    N = 2 * n - 1
    P = np.zeros((N, N))
    P[:n, :n] = np.eye(n)
    P[n:, n:] = 1e-14 * np.eye(n - 1)
    q = np.concatenate([-v, lam * np.ones(n - 1)])
    D = np.diff(np.eye(n), axis=0)
    rows = []
    for i in range(n - 1):
        e = np.zeros(n - 1)
        e[i] = -1.0
        rows.append(np.concatenate([D[i], e]))
        rows.append(np.concatenate([-D[i], e]))
    return _qp(P, q, np.array(rows), np.zeros(len(rows)))[:n]


def two_point_grid(v, feasible, objective, half_width=3.0, steps=601):
    """Dense grid search over pairs (a, b) around ``v``, refined once."""
    center = np.asarray(v, dtype=float)
    best = None
    width = half_width
    for _ in range(4):
        a = np.linspace(center[0] - width, center[0] + width, steps)
        b = np.linspace(center[1] - width, center[1] + width, steps)
        aa, bb = np.meshgrid(a, b, indexing="ij")
        val = objective(aa, bb)
        val = np.where(feasible(aa, bb), val, np.inf)
        i, j = np.unravel_index(np.argmin(val), val.shape)
        best = np.array([aa[i, j], bb[i, j]])
        center = best
        width = 4 * width / (steps - 1)
    return best


def best_k_term_residual(v, K):
    """min over all supports S with |S| = K of ||v - v_S||_2."""
    v = np.asarray(v, dtype=float)
    best = np.inf
    for support in itertools.combinations(range(v.size), K):
        r = v.copy()
        r[list(support)] = 0.0
        best = min(best, float(np.linalg.norm(r)))
    return best


def central_difference_gradient(f, x, h=1e-6):
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g
