"""Sparse recovery via concave penalties and iterative l1 reweighting.

The package solves min 1/2 ||y - Ax||^2 + lam * sum_i g(|x_i|) for
concave g (log, lq, mcp) by alternating weight updates w = g'(|x|) with
weighted-Lasso solves, either exactly (inner ADMM) or by a single
soft-thresholding step per sweep.  A benchmark harness reproduces the
compressed-sensing recovery experiments, and sklearn-style estimators
wrap the drivers.
"""

from .penalty import PenaltySpec, g_value, weight, weight_bounds, h_value, h_prime
from .linalg import (PowerIterationError, matvec, matvec_t, soft_threshold,
                     spectral_norm_sq, spd_factor, spd_solve)
from .wlasso import (Problem, AdmmConfig, WLassoSolution, AdmmCapError,
                     XUpdateCache, kkt_residual, objective, solve_admm)
from .irl1 import (StopRule, Trace, RunResult, StepSizeError, InnerSolveError,
                   reweight, biconvex_F, surrogate_H, step_ist,
                   run_irl1_admm, run_irl1_ist)
from .probgen import RNG_ID, InstanceSpec, Instance, gen_instance, add_noise_snr
from .bench import (BenchConfig, TrialRecord, is_recovered, rse, trial_seed,
                    run_bench, write_csv, read_csv, aggregate, load_config,
                    config_from_dict)
from .estimators import WeightedLasso, ReweightedLasso, ReweightedLassoIST

__version__ = "0.1.0"

__all__ = [
    "PenaltySpec", "g_value", "weight", "weight_bounds", "h_value", "h_prime",
    "PowerIterationError", "matvec", "matvec_t", "soft_threshold",
    "spectral_norm_sq", "spd_factor", "spd_solve",
    "Problem", "AdmmConfig", "WLassoSolution", "AdmmCapError", "XUpdateCache",
    "kkt_residual", "objective", "solve_admm",
    "StopRule", "Trace", "RunResult", "StepSizeError", "InnerSolveError",
    "reweight", "biconvex_F", "surrogate_H", "step_ist",
    "run_irl1_admm", "run_irl1_ist",
    "RNG_ID", "InstanceSpec", "Instance", "gen_instance", "add_noise_snr",
    "BenchConfig", "TrialRecord", "is_recovered", "rse", "trial_seed",
    "run_bench", "write_csv", "read_csv", "aggregate", "load_config",
    "config_from_dict",
    "WeightedLasso", "ReweightedLasso", "ReweightedLassoIST",
    "__version__",
]
