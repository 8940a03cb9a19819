"""BIHT and BFCS recovery loops.

Each iteration takes a subgradient step on the one-sided objective and then
projects: ``P_K(v)`` for BIHT, ``P_K(P_TV(v))`` for BFCS, optionally followed
by clipping to the nonnegative orthant. The unit-norm constraint is only
enforced on the returned estimate.
"""
import csv
import enum
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .objectives import ObjectiveKind, _subgradient_from_product, _value_from_margin
from .projections import DegenerateResultError, hard_threshold, normalize, project_nonneg, project_tv_ball, tv
from .sensing import sign_vector

__all__ = ["Algorithm", "SolverConfig", "IterationRecord", "SolverResult", "default_x0", "recover"]


class Algorithm(str, enum.Enum):
    BIHT = "BIHT"
    BFCS = "BFCS"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValueError(f"unknown algorithm {value!r}; expected 'BIHT' or 'BFCS'") from None


@dataclass
class SolverConfig:
    algorithm: Algorithm = Algorithm.BIHT
    objective: ObjectiveKind = ObjectiveKind.ONE_SIDED_L1
    tau: float = 1.0
    K: int = 100
    epsilon: float | None = None
    nonneg: bool = False
    max_iter: int = 300
    tol: float = 1e-3
    x0: np.ndarray | None = None

    def __post_init__(self):
        self.algorithm = Algorithm.parse(self.algorithm)
        self.objective = ObjectiveKind.parse(self.objective)
        self.tau = float(self.tau)
        self.K = int(self.K)
        self.max_iter = int(self.max_iter)
        self.tol = float(self.tol)
        self.nonneg = bool(self.nonneg)
        if not self.tau > 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.max_iter < 0:
            raise ValueError(f"max_iter must be >= 0, got {self.max_iter}")
        if self.algorithm is Algorithm.BFCS:
            if self.epsilon is None:
                raise ValueError("BFCS requires epsilon")
            self.epsilon = float(self.epsilon)
            if self.epsilon < 0:
                raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        elif self.epsilon is not None:
            raise ValueError("epsilon is only meaningful for BFCS")
        if self.x0 is not None:
            self.x0 = np.asarray(self.x0, dtype=float)

    @property
    def label(self):
        suffix = "-l2" if self.objective is ObjectiveKind.ONE_SIDED_L2 else ""
        return f"{self.algorithm.value}{suffix}"

    def to_dict(self):
        d = asdict(self)
        d["algorithm"] = self.algorithm.value
        d["objective"] = self.objective.value
        d["x0"] = None if self.x0 is None else self.x0.tolist()
        return d

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ValueError(f"unknown solver config fields: {sorted(unknown)}")
        return cls(**d)

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=2)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def from_json(cls, source):
        """Load from a JSON string or a path to a JSON file."""
        text = source
        if not str(source).lstrip().startswith("{"):
            with open(source) as fh:
                text = fh.read()
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    objective: float
    hamming: int
    rel_change: float
    tv: float
    # TV right after the TV-ball projection (BFCS only, else nan)
    tv_fused: float = math.nan


@dataclass
class SolverResult:
    x_hat: np.ndarray
    iterations: int
    converged: bool
    trace: list = field(default_factory=list)
    x_last: np.ndarray | None = None

    def write_trace_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iteration", "objective", "hamming", "rel_change", "tv", "tv_fused"])
            for r in self.trace:
                w.writerow([r.iteration, repr(r.objective), r.hamming, repr(r.rel_change), repr(r.tv), repr(r.tv_fused)])


def default_x0(A, y, config):
    """Starting point used when ``config.x0`` is None.

    Zero for the l1 objective. The l2 subgradient vanishes at zero, so l2 runs
    start from the normalized best K-term approximation of ``A^T y``.
    """
    n = A.shape[1]
    if config.objective is ObjectiveKind.ONE_SIDED_L1:
        return np.zeros(n)
    x0 = hard_threshold(A.T @ y, config.K)
    if config.nonneg:
        x0 = project_nonneg(x0)
    nrm = np.linalg.norm(x0)
    return x0 / nrm if nrm > 0 else x0


def recover(A, y, config):
    """Run BIHT or BFCS and return the unit-norm estimate with its trace.

    Raises :class:`DegenerateResultError` when the final iterate is zero.
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    m, n = A.shape
    if y.shape != (m,):
        raise ValueError(f"dimension mismatch: A is {m}x{n} but y has length {y.shape[0]}")
    if config.K > n:
        raise ValueError(f"sparsity K={config.K} exceeds signal length {n}")
    if config.x0 is None:
        x = default_x0(A, y, config)
    else:
        x = config.x0.copy()
        if x.shape != (n,):
            raise ValueError(f"x0 has length {x.shape[0]}, expected {n}")

    # overflow is caught explicitly below as a degenerate result
    with np.errstate(over="ignore", invalid="ignore"):
        return _iterate(A, y, config, x)


def _iterate(A, y, config, x):
    bfcs = config.algorithm is Algorithm.BFCS
    kind = config.objective
    tau = config.tau
    Ax = A @ x
    trace = []
    converged = False
    k = 0
    while k < config.max_iter:
        v = x - tau * _subgradient_from_product(kind, A, y, Ax)
        tv_fused = math.nan
        if bfcs:
            if not np.all(np.isfinite(v)):
                raise DegenerateResultError(f"iterate became non-finite at iteration {k + 1} (tau={tau} too large?)")
            v = project_tv_ball(v, config.epsilon)
            tv_fused = tv(v)
        x_new = hard_threshold(v, config.K)
        if config.nonneg:
            x_new = project_nonneg(x_new)
        nrm = np.linalg.norm(x_new)
        if not np.isfinite(nrm):
            raise DegenerateResultError(f"iterate became non-finite at iteration {k + 1} (tau={tau} too large?)")
        change = np.linalg.norm(x_new - x) / nrm if nrm > 0 else math.inf
        x = x_new
        Ax = A @ x
        k += 1
        trace.append(
            IterationRecord(
                iteration=k,
                objective=_value_from_margin(kind, y * Ax),
                hamming=int(np.count_nonzero(sign_vector(Ax) != y)),
                rel_change=float(change),
                tv=tv(x),
                tv_fused=tv_fused,
            )
        )
        if change <= config.tol:
            converged = True
            break

    if not np.any(x):
        raise DegenerateResultError(f"final iterate is the zero vector after {k} iterations")
    return SolverResult(x_hat=normalize(x), iterations=k, converged=converged, trace=trace, x_last=x)
