"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 runtime error (I/O, dimensions,
degenerate result). Data goes to files or stdout; the resolved configuration
and all diagnostics go to stderr.
"""
import argparse
import json
import logging
import os
import sys
from importlib import resources

from . import io
from ._accel import backend
from .harness import ExperimentConfig, grid_search_bfcs, run_experiment
from .metrics import evaluate
from .projections import DegenerateResultError, tv
from .sensing import SignalSpec, gaussian_matrix, generate_signal, measure
from .solvers import SolverConfig, recover

log = logging.getLogger("bfcs")

BUILTIN_CONFIGS = ("paper.json",)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer, got {text}")
    return v


def build_parser():
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = _Parser(prog="bfcs", description="1-bit compressive sensing: BIHT / BFCS recovery and benchmarks.",
                formatter_class=fmt)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen-matrix", help="write an m x n standard normal sensing matrix", formatter_class=fmt)
    g.add_argument("--m", type=int, default=1000, help="rows (measurements)")
    g.add_argument("--n", type=int, default=2000, help="columns (signal length)")
    g.add_argument("--seed", type=_seed, default=0, help="RNG seed")
    g.add_argument("--out", required=True, help="output matrix file (binary)")

    g = sub.add_parser("gen-signal", help="write a sparse piecewise-smooth test signal", formatter_class=fmt)
    g.add_argument("--n", type=int, default=2000, help="signal length")
    g.add_argument("--k", type=int, default=100, help="sparsity (multiple of 4)")
    g.add_argument("--positive-level", type=float, default=2.0, help="level of the B blocks")
    g.add_argument("--negative-level", type=float, default=-1.0, help="level of the C blocks")
    g.add_argument("--jitter-std", type=float, default=0.05, help="std of the per-entry Gaussian jitter")
    g.add_argument("--blocks-b", type=_floats, default=[100, 500], help="start indices of the two B blocks")
    g.add_argument("--blocks-c", type=_floats, default=[1000, 1500], help="start indices of the two C blocks")
    g.add_argument("--raw", action="store_true", help="write the signal before unit-norm scaling")
    g.add_argument("--seed", type=_seed, default=0, help="RNG seed")
    g.add_argument("--out", required=True, help="output file (.csv or .json)")

    g = sub.add_parser("measure", help="take noisy 1-bit measurements sign(Ax + w)", formatter_class=fmt)
    g.add_argument("--matrix", required=True, help="sensing matrix file")
    g.add_argument("--signal", required=True, help="signal file (.csv or .json)")
    g.add_argument("--sigma", type=float, default=0.0, help="noise standard deviation")
    g.add_argument("--seed", type=_seed, default=0, help="RNG seed for the noise")
    g.add_argument("--out", required=True, help="output observations file (.csv or .json)")

    g = sub.add_parser("recover", help="run BIHT or BFCS on stored observations", formatter_class=fmt)
    g.add_argument("--matrix", required=True, help="sensing matrix file")
    g.add_argument("--obs", required=True, help="observations file (.csv or .json)")
    g.add_argument("--config", help="SolverConfig JSON; explicit flags override its fields")
    g.add_argument("--algorithm", choices=["BIHT", "BFCS"], default=None, help="algorithm [BIHT]")
    g.add_argument("--objective", choices=["l1", "l2"], default=None, help="one-sided objective [l1]")
    g.add_argument("--tau", type=float, default=None, help="step size [1.0]")
    g.add_argument("--k", type=int, default=None, help="sparsity budget K [100]")
    g.add_argument("--epsilon", type=float, default=None, help="TV budget (BFCS only)")
    g.add_argument("--nonneg", action="store_true", default=None, help="project onto x >= 0 each iteration")
    g.add_argument("--max-iter", type=int, default=None, help="iteration cap [300]")
    g.add_argument("--tol", type=float, default=None, help="relative-change stopping threshold [0.001]")
    g.add_argument("--out", required=True, help="output estimate (.csv or .json)")
    g.add_argument("--trace", help="optional per-iteration trace CSV")

    g = sub.add_parser("metrics", help="compare an estimate with the true signal", formatter_class=fmt)
    g.add_argument("--truth", required=True, help="true signal file")
    g.add_argument("--estimate", required=True, help="estimated signal file")
    g.add_argument("--algorithm", default="", help="label for the CSV row")
    g.add_argument("--k", type=int, default=0, help="K for the CSV row")
    g.add_argument("--sigma", type=float, default=0.0, help="sigma for the CSV row")
    g.add_argument("--seed", type=_seed, default=0, help="seed for the CSV row")
    g.add_argument("--out", help="write the CSV row here instead of stdout")

    g = sub.add_parser("bench", help="run an experiment grid (paper.json is the built-in reference grid)", formatter_class=fmt)
    g.add_argument("--config", default="paper.json", help="ExperimentConfig JSON (paper.json is built in)")
    g.add_argument("--trials", type=int, default=None, help="override the number of trials")
    g.add_argument("--seed", type=_seed, default=None, help="override base_seed")
    g.add_argument("--jobs", type=int, default=1, help="worker processes")
    g.add_argument("--out", required=True, help="output directory (created if missing)")

    g = sub.add_parser("grid-search", help="oracle (tau, epsilon) search for BFCS", formatter_class=fmt)
    g.add_argument("--matrix", required=True, help="sensing matrix file")
    g.add_argument("--obs", required=True, help="observations file")
    g.add_argument("--truth", required=True, help="true signal file")
    g.add_argument("--objective", choices=["l1", "l2"], default="l1", help="one-sided objective")
    g.add_argument("--k", type=int, default=100, help="sparsity budget K")
    g.add_argument("--tau", type=_floats, default=[1e-3], help="comma-separated step sizes")
    g.add_argument("--eps", type=_floats, default=None, help="comma-separated absolute TV budgets")
    g.add_argument("--eps-factor", type=_floats, default=[1.0, 2.0, 3.0, 5.0, 10.0],
                   help="TV budgets as multiples of TV(truth); ignored when --eps is given")
    g.add_argument("--nonneg", action="store_true", help="project onto x >= 0 each iteration")
    g.add_argument("--max-iter", type=int, default=300, help="iteration cap")
    g.add_argument("--tol", type=float, default=1e-3, help="relative-change stopping threshold")
    g.add_argument("--out", help="write the evaluated grid as CSV here")
    return p


def _announce(command, resolved):
    doc = {"command": command, "backend": backend(), **resolved}
    print("resolved config: " + json.dumps(doc, sort_keys=True, default=str), file=sys.stderr)


def _cmd_gen_matrix(args):
    _announce("gen-matrix", {"m": args.m, "n": args.n, "seed": args.seed, "out": args.out})
    io.write_matrix(args.out, gaussian_matrix(args.m, args.n, args.seed))


def _cmd_gen_signal(args):
    spec = SignalSpec(n=args.n, K=args.k, positive_level=args.positive_level, negative_level=args.negative_level,
                      jitter_std=args.jitter_std, block_starts_B=[int(b) for b in args.blocks_b],
                      block_starts_C=[int(c) for c in args.blocks_c])
    _announce("gen-signal", {"spec": spec.__dict__, "raw": args.raw, "seed": args.seed, "out": args.out})
    x, scale = generate_signal(spec, args.seed, return_norm=True)
    io.write_signal(args.out, x * scale if args.raw else x)


def _cmd_measure(args):
    _announce("measure", {"matrix": args.matrix, "signal": args.signal, "sigma": args.sigma, "seed": args.seed, "out": args.out})
    A = io.read_matrix(args.matrix)
    x = io.read_signal(args.signal)
    if A.shape[1] != x.size:
        raise ValueError(f"matrix {args.matrix} has {A.shape[1]} columns but signal {args.signal} has length {x.size}")
    io.write_signs(args.out, measure(A, x, args.sigma, args.seed))


def _solver_config(args):
    fields = SolverConfig.from_json(args.config).to_dict() if args.config else {}
    overrides = {"algorithm": args.algorithm, "objective": args.objective, "tau": args.tau, "K": args.k,
                 "epsilon": args.epsilon, "nonneg": args.nonneg, "max_iter": args.max_iter, "tol": args.tol}
    fields.update({k: v for k, v in overrides.items() if v is not None})
    return SolverConfig.from_dict(fields)


def _cmd_recover(args):
    try:
        config = _solver_config(args)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bfcs recover: error: {exc}") from None
    _announce("recover", {"solver": config.to_dict(), "matrix": args.matrix, "obs": args.obs, "out": args.out})
    A = io.read_matrix(args.matrix)
    y = io.read_signs(args.obs)
    if A.shape[0] != y.size:
        raise ValueError(f"matrix {args.matrix} is {A.shape[0]}x{A.shape[1]} but observations {args.obs} "
                         f"have length {y.size}")
    res = recover(A, y, config)
    io.write_signal(args.out, res.x_hat)
    if args.trace:
        res.write_trace_csv(args.trace)
    log.info("%s: %d iterations, converged=%s", config.label, res.iterations, res.converged)


def _cmd_metrics(args):
    _announce("metrics", {"truth": args.truth, "estimate": args.estimate})
    x = io.read_signal(args.truth)
    e = io.read_signal(args.estimate)
    rep = evaluate(x, e)
    header = "algorithm,K,sigma,seed,mae,mse,snr_db,per,age"
    line = ",".join([args.algorithm, str(args.k), repr(args.sigma), str(args.seed)]
                    + [repr(v) for v in rep.as_dict().values()])
    text = f"{header}\n{line}\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_experiment(path):
    if not os.path.exists(path) and os.path.basename(path) in BUILTIN_CONFIGS:
        log.info("using built-in %s", path)
        text = resources.files("bfcs").joinpath("data", os.path.basename(path)).read_text()
        return ExperimentConfig.from_dict(json.loads(text))
    return ExperimentConfig.from_json(path)


def _cmd_bench(args):
    if args.jobs < 1:
        raise UsageError("bfcs bench: error: --jobs must be >= 1")
    config = _load_experiment(args.config)
    if args.trials is not None:
        config.trials = args.trials
    if args.seed is not None:
        config.base_seed = args.seed
    config = ExperimentConfig.from_dict(config.to_dict())
    _announce("bench", {"experiment": config.to_dict(), "jobs": args.jobs, "out": args.out})
    os.makedirs(args.out, exist_ok=True)

    def progress(done, total):
        log.info("bench: %d/%d (cell, trial) jobs done", done, total)

    report = run_experiment(config, jobs=args.jobs, progress=progress)
    paths = report.write(args.out)
    for agg in report.aggregates():
        print(f"{agg['algorithm']:>8} K={agg['K']:<4} sigma={agg['sigma']:<4g} "
              f"SNR={agg['snr_db_mean']:7.2f}±{agg['snr_db_std']:.2f} dB  PER={100 * agg['per_mean']:5.2f}%  "
              f"AGE={agg['age_mean']:.4f}  ok={agg['ok']}/{agg['trials']}")
    print(f"rows written to {paths['rows']}")


def _cmd_grid_search(args):
    A = io.read_matrix(args.matrix)
    y = io.read_signs(args.obs)
    x = io.read_signal(args.truth)
    if A.shape != (y.size, x.size):
        raise ValueError(f"matrix {args.matrix} is {A.shape[0]}x{A.shape[1]} but observations have length "
                         f"{y.size} and truth has length {x.size}")
    eps_list = args.eps if args.eps is not None else [f * tv(x) for f in args.eps_factor]
    base = SolverConfig("BFCS", args.objective, tau=args.tau[0], K=args.k, epsilon=eps_list[0],
                        nonneg=args.nonneg, max_iter=args.max_iter, tol=args.tol)
    _announce("grid-search", {"solver": base.to_dict(), "tau": args.tau, "eps": eps_list})
    best = grid_search_bfcs(A, y, x, args.tau, eps_list, base)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("tau,epsilon,snr_db\n")
            fh.writelines(f"{t!r},{e!r},{s!r}\n" for t, e, s in best.table)
    print(json.dumps({"tau": best.tau, "epsilon": best.epsilon, "snr_db": best.snr_db}))


COMMANDS = {
    "gen-matrix": _cmd_gen_matrix,
    "gen-signal": _cmd_gen_signal,
    "measure": _cmd_measure,
    "recover": _cmd_recover,
    "metrics": _cmd_metrics,
    "bench": _cmd_bench,
    "grid-search": _cmd_grid_search,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (OSError, ValueError, DegenerateResultError, KeyError) as exc:
        print(f"bfcs {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
