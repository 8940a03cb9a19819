"""Experiment grid runner: synthetic trials, metric tables and signal dumps.

Every (cell, trial) pair gets its own 64-bit seed derived from ``base_seed``
through ``numpy.random.SeedSequence``; the matrix, the signal jitter and the
measurement noise then use separate substreams of that seed (see
:mod:`bfcs.sensing`). Rows are assembled by key, so serial and parallel runs
write identical files.
"""
import csv
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from threadpoolctl import threadpool_limits

from .metrics import SNR_EXACT, evaluate, snr_db
from .objectives import ObjectiveKind
from .projections import DegenerateResultError, tv
from .sensing import SignalSpec, gaussian_matrix, generate_signal, measure
from .solvers import Algorithm, SolverConfig, recover

__all__ = [
    "AlgorithmEntry",
    "ExperimentConfig",
    "ExperimentReport",
    "GridSearchOutcome",
    "run_experiment",
    "run_row",
    "grid_search_bfcs",
    "dump_recovered_signals",
    "trial_seed",
]

log = logging.getLogger(__name__)

ROW_FIELDS = [
    "algorithm", "K", "sigma", "seed", "mae", "mse", "snr_db", "per", "age",
    "trial", "tau", "epsilon", "iterations", "converged", "status",
]
METRIC_NAMES = ("mae", "mse", "snr_db", "per", "age")


@dataclass(frozen=True)
class AlgorithmEntry:
    """One algorithm column of the experiment.

    ``tau`` and ``eps_factor`` may hold several candidates; BFCS then picks the
    pair with the best SNR against the true signal (oracle tuning). The TV
    budget is ``eps_factor * TV(x_true)``.
    """

    algorithm: Algorithm
    objective: ObjectiveKind
    tau: tuple = (1.0,)
    eps_factor: tuple = (1.0,)

    @property
    def label(self):
        suffix = "-l2" if self.objective is ObjectiveKind.ONE_SIDED_L2 else ""
        return f"{self.algorithm.value}{suffix}"

    @classmethod
    def parse(cls, item, default_tau, default_eps):
        if isinstance(item, str):
            name = item.strip()
            objective = "l2" if name.lower().endswith(("-l2", "_l2")) else "l1"
            item = {"algorithm": name.split("-")[0].split("_")[0], "objective": objective}
        elif isinstance(item, (list, tuple)):
            item = {"algorithm": item[0], "objective": item[1]}
        else:
            item = dict(item)
        algorithm = Algorithm.parse(item.pop("algorithm"))
        objective = ObjectiveKind.parse(item.pop("objective", "l1"))
        tau = _as_tuple(item.pop("tau", default_tau))
        eps = _as_tuple(item.pop("eps_factor", default_eps))
        if item:
            raise ValueError(f"unknown algorithm entry fields: {sorted(item)}")
        if algorithm is Algorithm.BIHT and len(tau) != 1:
            raise ValueError("BIHT takes a single tau")
        if not tau or not eps:
            raise ValueError("tau and eps_factor candidate lists must be non-empty")
        return cls(algorithm, objective, tau, eps)

    def to_dict(self):
        d = {"algorithm": self.algorithm.value, "objective": self.objective.value, "tau": list(self.tau)}
        if self.algorithm is Algorithm.BFCS:
            d["eps_factor"] = list(self.eps_factor)
        return d


def _as_tuple(v):
    if isinstance(v, (list, tuple)):
        return tuple(float(t) for t in v)
    return (float(v),)


@dataclass
class ExperimentConfig:
    n: int = 2000
    m: int = 1000
    K_list: list = field(default_factory=lambda: [100, 400])
    sigma_list: list = field(default_factory=lambda: [1.0, 4.0])
    algorithms: list = field(default_factory=lambda: ["BIHT", "BIHT-l2", "BFCS", "BFCS-l2"])
    trials: int = 10
    base_seed: int = 0
    tau: float = 1.0
    tol: float = 1e-3
    max_iter: int = 300
    nonneg: bool = False
    # default BFCS TV budgets, as multiples of TV(x_true)
    bfcs_grid: list = field(default_factory=lambda: [1.0])
    # "unnormalized": noise is added to A @ xbar before normalizing the signal;
    # "normalized": noise is added to A @ x with ||x|| = 1
    noise_reference: str = "unnormalized"
    signal: dict = field(default_factory=dict)
    dump_trial: int | None = None

    def __post_init__(self):
        if not self.K_list or not self.sigma_list or not self.algorithms:
            raise ValueError("K_list, sigma_list and algorithms must be non-empty")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.noise_reference not in ("unnormalized", "normalized"):
            raise ValueError(f"noise_reference must be 'unnormalized' or 'normalized', got {self.noise_reference!r}")
        self.K_list = [int(k) for k in self.K_list]
        self.sigma_list = [float(s) for s in self.sigma_list]
        self.algorithms = [
            a if isinstance(a, AlgorithmEntry) else AlgorithmEntry.parse(a, self.tau, self.bfcs_grid)
            for a in self.algorithms
        ]
        labels = [a.label for a in self.algorithms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate algorithms: {labels}")
        for K in self.K_list:
            self.signal_spec(K)  # validates block layout

    def signal_spec(self, K):
        return SignalSpec(n=self.n, K=K, **self.signal)

    def cells(self):
        return [(ki, si) for ki in range(len(self.K_list)) for si in range(len(self.sigma_list))]

    def to_dict(self):
        return {
            "n": self.n, "m": self.m, "K_list": self.K_list, "sigma_list": self.sigma_list,
            "algorithms": [a.to_dict() for a in self.algorithms], "trials": self.trials,
            "base_seed": self.base_seed, "tau": self.tau, "tol": self.tol, "max_iter": self.max_iter,
            "nonneg": self.nonneg, "bfcs_grid": list(self.bfcs_grid),
            "noise_reference": self.noise_reference, "signal": self.signal, "dump_trial": self.dump_trial,
        }

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown experiment config fields: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def trial_seed(base_seed, k_index, s_index, trial):
    """64-bit seed for one (cell, trial); independent across all three keys."""
    ss = np.random.SeedSequence(entropy=int(base_seed), spawn_key=(int(k_index), int(s_index), int(trial)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class GridSearchOutcome:
    tau: float
    epsilon: float
    snr_db: float
    result: object = None
    # (tau, epsilon, snr_db) for every evaluated candidate, in grid order
    table: list = field(default_factory=list)


def grid_search_bfcs(A, y, x_true, tau_list, eps_list, base_config):
    """Exhaustive (tau, eps) search maximizing SNR against ``x_true``.

    ``eps_list`` holds absolute TV budgets. Ties go to the earliest candidate
    (tau-major order). Candidates whose run degenerates are scored ``-inf``.
    """
    if len(tau_list) == 0 or len(eps_list) == 0:
        raise ValueError("grid search needs at least one tau and one epsilon")
    best = None
    table = []
    for tau in tau_list:
        for eps in eps_list:
            cfg = replace(base_config, algorithm=Algorithm.BFCS, tau=float(tau), epsilon=float(eps))
            try:
                res = recover(A, y, cfg)
                score = snr_db(x_true, res.x_hat)
            except DegenerateResultError:
                res, score = None, -math.inf
            table.append((float(tau), float(eps), score))
            if best is None or score > best.snr_db:
                best = GridSearchOutcome(float(tau), float(eps), score, res)
    if best.result is None:
        raise DegenerateResultError("every grid candidate produced a degenerate result")
    best.table = table
    return best


def dump_recovered_signals(out_dir, cell, trial, x_true, estimates):
    """Write ``index,true_value,estimate`` CSVs, one per algorithm label.

    ``cell`` is a ``(K, sigma)`` pair; returns the written paths.
    """
    if not os.path.isdir(out_dir):
        raise FileNotFoundError(f"output directory does not exist: {out_dir}")
    K, sigma = cell
    paths = []
    for label, est in estimates.items():
        path = os.path.join(out_dir, f"signal_K{K}_sigma{sigma:g}_trial{trial}_{label}.csv")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "true_value", "estimate"])
            for i, (t, e) in enumerate(zip(x_true, est)):
                w.writerow([i, repr(float(t)), repr(float(e))])
        paths.append(path)
    return paths


def _make_problem(config, K, sigma, seed):
    A = gaussian_matrix(config.m, config.n, seed)
    x, scale = generate_signal(config.signal_spec(K), seed, return_norm=True)
    ref = x * scale if config.noise_reference == "unnormalized" else x
    y = measure(A, ref, sigma, seed)
    return A, x, y


def run_row(config, k_index, s_index, trial):
    """Run every algorithm on one (cell, trial); returns (rows, timings, estimates).

    Independent of any other row, so re-running it alone reproduces its metrics.
    """
    K = config.K_list[k_index]
    sigma = config.sigma_list[s_index]
    seed = trial_seed(config.base_seed, k_index, s_index, trial)
    rows, timings, estimates = [], [], {}
    with threadpool_limits(limits=1):
        A, x, y = _make_problem(config, K, sigma, seed)
        tv_true = tv(x)
        for entry in config.algorithms:
            base = SolverConfig(
                algorithm=entry.algorithm, objective=entry.objective, tau=entry.tau[0], K=K,
                epsilon=tv_true * entry.eps_factor[0] if entry.algorithm is Algorithm.BFCS else None,
                nonneg=config.nonneg, max_iter=config.max_iter, tol=config.tol,
            )
            row = {"algorithm": entry.label, "K": K, "sigma": sigma, "seed": seed, "trial": trial}
            t0 = time.perf_counter()
            try:
                if entry.algorithm is Algorithm.BFCS:
                    eps_list = [tv_true * f for f in entry.eps_factor]
                    best = grid_search_bfcs(A, y, x, entry.tau, eps_list, base)
                    res, tau, eps = best.result, best.tau, best.epsilon
                else:
                    res, tau, eps = recover(A, y, base), base.tau, None
                report = evaluate(x, res.x_hat)
                row.update(report.as_dict())
                row.update(tau=tau, epsilon=eps, iterations=res.iterations, converged=res.converged, status="ok")
                estimates[entry.label] = res.x_hat
            except DegenerateResultError as exc:
                log.warning("degenerate result for %s K=%s sigma=%s trial=%s: %s", entry.label, K, sigma, trial, exc)
                row.update({name: math.nan for name in METRIC_NAMES})
                row.update(tau=base.tau, epsilon=base.epsilon, iterations=0, converged=False, status="degenerate")
            timings.append({"algorithm": entry.label, "K": K, "sigma": sigma, "trial": trial,
                            "wall_time": time.perf_counter() - t0})
            rows.append(row)
    return rows, timings, (x, estimates)


def _row_job(args):
    config, ki, si, trial = args
    rows, timings, dump = run_row(config, ki, si, trial)
    if config.dump_trial != trial:
        dump = None
    return (ki, si, trial), rows, timings, dump


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list
    timings: list
    # (K, sigma, trial) -> (x_true, {label: estimate}) for the dumped trial
    dumps: dict = field(default_factory=dict)

    def aggregates(self):
        """Per (algorithm, K, sigma) mean and sample std of each metric over ok rows."""
        out = []
        labels = [a.label for a in self.config.algorithms]
        for K in self.config.K_list:
            for sigma in self.config.sigma_list:
                for label in labels:
                    cell = [r for r in self.rows
                            if r["algorithm"] == label and r["K"] == K and r["sigma"] == sigma]
                    ok = [r for r in cell if r["status"] == "ok"]
                    agg = {"algorithm": label, "K": K, "sigma": sigma, "trials": len(cell), "ok": len(ok)}
                    for name in METRIC_NAMES + ("iterations",):
                        vals = np.array([r[name] for r in ok], dtype=float)
                        agg[f"{name}_mean"] = float(vals.mean()) if vals.size else math.nan
                        agg[f"{name}_std"] = float(vals.std(ddof=1)) if vals.size > 1 else 0.0 if vals.size else math.nan
                    out.append(agg)
        return out

    def cell_mean(self, label, K, sigma, metric):
        for agg in self.aggregates():
            if agg["algorithm"] == label and agg["K"] == K and agg["sigma"] == sigma:
                return agg[f"{metric}_mean"]
        raise KeyError((label, K, sigma))

    def write_rows_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(ROW_FIELDS)
            for r in self.rows:
                w.writerow([_fmt(r[k]) for k in ROW_FIELDS])

    def write_timings_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["algorithm", "K", "sigma", "trial", "wall_time"], lineterminator="\n")
            w.writeheader()
            w.writerows(self.timings)

    def write_aggregates_json(self, path):
        doc = {"config": self.config.to_dict(), "aggregates": self.aggregates()}
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2, default=_json_default)
            fh.write("\n")

    def write(self, out_dir):
        if not os.path.isdir(out_dir):
            raise FileNotFoundError(f"output directory does not exist: {out_dir}")
        paths = {
            "rows": os.path.join(out_dir, "rows.csv"),
            "aggregates": os.path.join(out_dir, "aggregates.json"),
            "timings": os.path.join(out_dir, "timings.csv"),
        }
        self.write_rows_csv(paths["rows"])
        self.write_aggregates_json(paths["aggregates"])
        self.write_timings_csv(paths["timings"])
        for (K, sigma, trial), (x, estimates) in sorted(self.dumps.items()):
            dump_recovered_signals(out_dir, (K, sigma), trial, x, estimates)
        return paths


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if v == SNR_EXACT:
            return "inf"
        return repr(v)
    if v is None:
        return ""
    return str(v)


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def run_experiment(config, jobs=1, progress=None):
    """Run the full grid; ``jobs > 1`` spreads (cell, trial) jobs over processes."""
    tasks = [(config, ki, si, t) for ki, si in config.cells() for t in range(config.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_row_job, tasks))
    else:
        results = []
        for task in tasks:
            results.append(_row_job(task))
            if progress is not None:
                progress(len(results), len(tasks))
    results.sort(key=lambda r: r[0])
    rows, timings, dumps = [], [], {}
    for (ki, si, trial), r, t, dump in results:
        rows.extend(r)
        timings.extend(t)
        if dump is not None:
            dumps[(config.K_list[ki], config.sigma_list[si], trial)] = dump
    return ExperimentReport(config=config, rows=rows, timings=timings, dumps=dumps)
