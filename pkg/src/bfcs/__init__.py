"""1-bit compressive sensing recovery with BIHT and BFCS."""
from ._accel import backend
from .metrics import MetricReport, age, evaluate, mae, mse, per, snr_db
from .objectives import ObjectiveKind, consistency_hamming, negative_part, objective_value, subgradient
from .projections import (
    DegenerateResultError,
    hard_threshold,
    normalize,
    project_nonneg,
    project_tv_ball,
    tv,
    tv_prox,
)
from .sensing import SignalSpec, gaussian_matrix, generate_signal, make_rng, measure, sign_vector
from .solvers import Algorithm, SolverConfig, SolverResult, recover

__version__ = "0.1.0"
