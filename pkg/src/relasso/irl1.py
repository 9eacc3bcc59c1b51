"""Iterative l1 reweighting drivers.

Two drivers share the same outer scheme

    w(t)   = g'(|x(t)|)          componentwise reweighting
    x(t+1) = approximate minimizer of 0.5*||y-Ax||^2 + lam*sum w_i(t)|x_i|

and differ in how the weighted subproblem is treated: the ADMM driver
solves it to optimality (alternated convex search on the biconvex
functional F), the IST driver replaces it by a single soft-thresholded
gradient step.  Both stop on ||x(t) - x(t-1)||_2 < delta or at t_max;
the trace additionally records the joint (x, w) step norms and the
functional values F(x(t), w(t)) taken after each w-update.
"""

import numpy as np
from dataclasses import dataclass, field

from . import linalg, penalty
from .wlasso import AdmmConfig, AdmmCapError, XUpdateCache, solve_admm


@dataclass(frozen=True)
class StopRule:
    """Outer stopping: iterate-change tolerance delta and cap t_max.

    delta = 0 disables the step-norm test (the driver runs to t_max).
    """

    delta: float = 1e-5
    t_max: int = 100

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if self.t_max < 1:
            raise ValueError("t_max must be at least 1")


@dataclass
class Trace:
    f_values: np.ndarray = field(default_factory=lambda: np.empty(0))
    step_norms: np.ndarray = field(default_factory=lambda: np.empty(0))
    step_norms_joint: np.ndarray = field(default_factory=lambda: np.empty(0))
    outer_iters: int = 0
    inner_iters_total: int = 0


@dataclass
class RunResult:
    x_hat: np.ndarray
    w_final: np.ndarray
    trace: Trace
    converged: bool


class StepSizeError(ValueError):
    """IST step size violates tau * ||A||_2^2 < 1."""


class InnerSolveError(RuntimeError):
    """The inner weighted-Lasso solve failed; carries the partial run."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


def reweight(spec, x):
    """w_i = g'(|x_i|): the minimizer of F(x, .) over the weight box."""
    return penalty.weight(spec, np.abs(np.asarray(x, dtype=float)))


def biconvex_F(p, spec, x, w):
    """F(x, w) = 0.5*||y - A x||^2 + lam * sum_i (w_i |x_i| + h(w_i))."""
    x = linalg._as_vector(x, p.n, "x")
    r = p.y - p.A @ x
    return _f_from_residual(p, spec, x, w, r)


def _f_from_residual(p, spec, x, w, r):
    hw = penalty.h_value(spec, w)
    return 0.5 * float(r @ r) + p.lam * float(np.sum(w * np.abs(x)) + np.sum(hw))


def surrogate_H(p, spec, x, w, b, tau):
    """H(x, w, b) = F(x, w) + 0.5*||x - b||^2 - (tau/2)*||A(x - b)||^2."""
    d = np.asarray(x, dtype=float) - np.asarray(b, dtype=float)
    Ad = p.A @ d
    return biconvex_F(p, spec, x, w) + 0.5 * float(d @ d) - 0.5 * tau * float(Ad @ Ad)


def step_ist(p, spec, x, tau):
    """One reweighted IST sweep: S_{lam*w}[x + tau A^T (y - A x)].

    The thresholds are lam * w_i with w = g'(|x|); the caller is
    responsible for tau * ||A||_2^2 < 1.
    """
    x = linalg._as_vector(x, p.n, "x")
    w = reweight(spec, x)
    grad_step = x + tau * (p.A.T @ (p.y - p.A @ x))
    return linalg.soft_threshold(grad_step, p.lam * w)


def run_irl1_admm(p, spec, x0=None, stop=None, cfg=None, cache=None, record=True):
    """Reweighting with an exact inner ADMM solve per sweep (ACS).

    Each sweep starts the inner solver from the previous outer iterate
    and shares one x-update cache.  An inner AdmmCapError aborts the run
    and is re-raised as InnerSolveError carrying the partial RunResult
    (the capped iterate and the trace up to that point).  record=False
    skips the F and joint-step bookkeeping (the trace then carries step
    norms and iteration counts only).
    """
    stop = stop or StopRule()
    cfg = cfg or AdmmConfig()
    x = np.zeros(p.n) if x0 is None else np.asarray(x0, dtype=float).copy()
    w = reweight(spec, x)
    cache = cache or XUpdateCache(p.A, cfg.rho)

    f_vals, steps, joints = [], [], []
    inner_total = 0
    converged = False
    for _ in range(stop.t_max):
        try:
            sol = solve_admm(p, w, cfg, x0=x, cache=cache)
        except AdmmCapError as e:
            inner_total += e.solution.iters
            xb = e.solution.x
            trace = _pack_trace(f_vals, steps, joints, inner_total)
            partial = RunResult(xb, reweight(spec, xb), trace, False)
            raise InnerSolveError(f"inner solve failed at outer sweep "
                                  f"{trace.outer_iters + 1}: {e}", partial) from e
        inner_total += sol.iters
        x_new = sol.x
        w_new = reweight(spec, x_new)
        st = float(np.linalg.norm(x_new - x))
        if record:
            joints.append(float(np.hypot(st, np.linalg.norm(w_new - w))))
            f_vals.append(biconvex_F(p, spec, x_new, w_new))
        steps.append(st)
        x, w = x_new, w_new
        if st < stop.delta:
            converged = True
            break

    return RunResult(x, w, _pack_trace(f_vals, steps, joints, inner_total), converged)


def run_irl1_ist(p, spec, x0=None, tau=0.25, stop=None, enforce_step=True,
                 record=True):
    """Reweighted iterative soft thresholding (one sweep = one step).

    With enforce_step the spectral norm of A is estimated and
    tau * ||A||_2^2 < 1 is required, else a StepSizeError names the
    largest admissible tau.  Each sweep costs two products with A; the
    functional value F(x(t), w(t)) is recorded for every sweep unless
    record=False, which keeps only step norms and counts.
    """
    stop = stop or StopRule()
    if not tau > 0:
        raise ValueError("tau must be positive")
    if enforce_step:
        s2 = linalg.spectral_norm_sq(p.A)
        if tau * s2 >= 1.0:
            raise StepSizeError(
                f"tau * ||A||_2^2 = {tau * s2:.6g} >= 1 with ||A||_2^2 = {s2:.6g}; "
                f"the largest admissible tau is {1.0 / s2:.6g}")

    n = p.n
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    w = reweight(spec, x)
    f_vals, steps, joints = [], [], []
    converged = False
    t_done = 0

    # hot loop buffers; the transposed copy keeps both products on
    # contiguous memory
    At = np.ascontiguousarray(p.A.T)
    rb = np.empty(p.m)
    g = np.empty(n)
    sgn = np.empty(n)
    x_new = np.empty(n)
    d = np.empty(n)

    # F(x(t), w(t)) needs the residual at x(t), which the next sweep
    # computes anyway, so its recording is deferred by one sweep
    for t in range(1, stop.t_max + 1):
        np.dot(p.A, x, out=rb)
        np.subtract(p.y, rb, out=rb)
        if record and t > 1:
            f_vals.append(_f_from_residual(p, spec, x, w, rb))
        np.dot(At, rb, out=g)
        g *= tau
        g += x
        np.sign(g, out=sgn)
        np.abs(g, out=g)
        g -= p.lam * w
        np.maximum(g, 0.0, out=g)
        np.multiply(sgn, g, out=x_new)
        w_new = reweight(spec, x_new)
        np.subtract(x_new, x, out=d)
        st = float(np.linalg.norm(d))
        if record:
            joints.append(float(np.hypot(st, np.linalg.norm(w_new - w))))
        steps.append(st)
        x, x_new = x_new, x
        w = w_new
        t_done = t
        if st < stop.delta:
            converged = True
            break
    if record:
        np.dot(p.A, x, out=rb)
        np.subtract(p.y, rb, out=rb)
        f_vals.append(_f_from_residual(p, spec, x, w, rb))

    trace = _pack_trace(f_vals, steps, joints, t_done)
    return RunResult(x.copy(), w, trace, converged)


def _pack_trace(f_vals, steps, joints, inner_total):
    return Trace(np.asarray(f_vals), np.asarray(steps), np.asarray(joints),
                 len(steps), inner_total)
