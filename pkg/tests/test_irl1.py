"""Tests for the reweighting drivers (exact inner solves and IST)."""

import numpy as np
import pytest

from relasso.linalg import soft_threshold, spectral_norm_sq
from relasso.penalty import PenaltySpec, weight_bounds
from relasso.wlasso import AdmmConfig, Problem, kkt_residual, solve_admm
from relasso.irl1 import (
    InnerSolveError,
    StepSizeError,
    StopRule,
    biconvex_F,
    reweight,
    run_irl1_admm,
    run_irl1_ist,
    step_ist,
    surrogate_H,
)

LOG = PenaltySpec("log")
TIGHT = AdmmConfig(rho=1.0, tol_abs=1e-10, tol_rel=1e-8, max_iter=200000)


def _small_gauss(seed, m=30, n=80, k=6, lam=1e-4):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n)) / np.sqrt(m)
    x = np.zeros(n)
    x[rng.choice(n, size=k, replace=False)] = rng.standard_normal(k)
    return Problem(A, A @ x, lam), rng


def test_stop_rule_validation():
    assert StopRule(delta=0.0).delta == 0.0  # step test disabled
    with pytest.raises(ValueError):
        StopRule(delta=-1e-9)
    with pytest.raises(ValueError):
        StopRule(t_max=0)


def test_reweight_examples():
    assert np.array_equal(reweight(LOG, np.zeros(10)), np.full(10, 10.0))
    mcp = PenaltySpec("mcp")
    assert np.array_equal(reweight(mcp, np.array([1.0, 0.0])), np.array([1.0, 2.0]))
    # reweighting sees magnitudes only
    assert reweight(mcp, np.array([-1.5]))[0] == 0.5


def test_biconvex_f_value():
    p = Problem(np.eye(2), np.array([1.0, 0.0]), 1.0)
    f = biconvex_F(p, LOG, np.zeros(2), np.full(2, 10.0))
    assert np.isclose(f, -2.1051701859880914, atol=1e-14)
    # mcp at w = alpha has h = 0, so F is the plain weighted objective
    mcp = PenaltySpec("mcp")
    f = biconvex_F(p, mcp, np.zeros(2), np.full(2, 2.0))
    assert f == 0.5


def test_biconvex_f_rejects_out_of_box_weights():
    p = Problem(np.eye(2), np.array([1.0, 0.0]), 1.0)
    with pytest.raises(ValueError):
        biconvex_F(p, LOG, np.zeros(2), np.array([10.0, 11.0]))
    with pytest.raises(ValueError):
        biconvex_F(p, LOG, np.zeros(2), np.array([0.0, 10.0]))


def test_reweight_minimizes_f_over_weights():
    p, rng = _small_gauss(0)
    x = rng.standard_normal(p.n) * 0.1
    for spec in (LOG, PenaltySpec("lq"), PenaltySpec("mcp")):
        w_star = reweight(spec, x)
        f_star = biconvex_F(p, spec, x, w_star)
        lo, hi = weight_bounds(spec)
        for _ in range(100):
            w = rng.uniform(lo + 1e-9, hi, size=p.n)
            assert f_star <= biconvex_F(p, spec, x, w) + 1e-10


def test_surrogate_h_composition():
    p, rng = _small_gauss(1)
    x = rng.standard_normal(p.n) * 0.2
    b = rng.standard_normal(p.n) * 0.2
    w = reweight(LOG, x)
    tau = 0.25
    d = x - b
    expect = (biconvex_F(p, LOG, x, w)
              + 0.5 * float(d @ d)
              - 0.5 * tau * float(np.linalg.norm(p.A @ d) ** 2))
    assert np.isclose(surrogate_H(p, LOG, x, w, b, tau), expect, atol=1e-12)
    # at b = x the proximity terms vanish and H equals F
    assert surrogate_H(p, LOG, x, w, x, tau) == biconvex_F(p, LOG, x, w)


def test_surrogate_majorizes_f():
    # tau ||A||^2 < 1 makes H an upper model of F, tight at b
    p, rng = _small_gauss(2)
    tau = 0.9 / spectral_norm_sq(p.A)
    for _ in range(20):
        x = rng.standard_normal(p.n) * 0.3
        b = rng.standard_normal(p.n) * 0.3
        w = reweight(LOG, b)
        assert surrogate_H(p, LOG, x, w, b, tau) >= biconvex_F(p, LOG, x, w) - 1e-12


def test_identity_fixed_point_admm():
    # A = I decouples; the reweighted solution solves x = S_{lam g'(|x|)}(y).
    # The fixed point below was computed by iterating that scalar map.
    p = Problem(np.eye(2), np.array([3.0, 0.5]), 1e-5)
    res = run_irl1_admm(p, LOG, stop=StopRule(delta=1e-12, t_max=50), cfg=TIGHT)
    oracle = np.array([2.9999967741901918, 0.49998333287034463])
    assert np.max(np.abs(res.x_hat - oracle)) < 1e-8
    assert res.converged
    # at this lambda the debiasing is nearly exact
    assert np.max(np.abs(res.x_hat - p.y)) < 1e-3
    assert np.array_equal(res.w_final, reweight(LOG, res.x_hat))


def test_single_sweep_equals_direct_solve():
    p, _ = _small_gauss(3)
    res = run_irl1_admm(p, LOG, stop=StopRule(delta=0.0, t_max=1), cfg=TIGHT)
    direct = solve_admm(p, reweight(LOG, np.zeros(p.n)), TIGHT, x0=np.zeros(p.n))
    assert np.array_equal(res.x_hat, direct.x)
    assert res.trace.outer_iters == 1
    assert res.trace.inner_iters_total == direct.iters
    assert res.trace.f_values.shape == (1,)
    assert not res.converged


def test_trace_shapes_and_pairing():
    p, _ = _small_gauss(4)
    for spec in (LOG, PenaltySpec("lq"), PenaltySpec("mcp")):
        res = run_irl1_admm(p, spec, stop=StopRule(delta=1e-7, t_max=40), cfg=TIGHT)
        t = res.trace
        assert t.f_values.shape == t.step_norms.shape == t.step_norms_joint.shape
        assert t.f_values.shape == (t.outer_iters,)
        assert t.inner_iters_total > 0
        # every recorded F is taken after the w-update of its sweep
        assert t.f_values[-1] == biconvex_F(p, spec, res.x_hat, res.w_final)
        # the joint (x, w) step dominates the x step
        assert np.all(t.step_norms_joint >= t.step_norms - 1e-15)
        assert res.converged == (t.step_norms[-1] < 1e-7)


def test_sweep_prefix_is_deterministic():
    p, _ = _small_gauss(5)
    short = run_irl1_admm(p, LOG, stop=StopRule(delta=0.0, t_max=1), cfg=TIGHT)
    full = run_irl1_admm(p, LOG, stop=StopRule(delta=0.0, t_max=3), cfg=TIGHT)
    assert full.trace.f_values[0] == short.trace.f_values[0]
    assert full.trace.step_norms[0] == short.trace.step_norms[0]


def test_acs_descent_and_stationarity():
    # alternated convex search: F never increases along the sweeps, and
    # the final pair is a partial minimum in each block
    p, _ = _small_gauss(6)
    for spec in (LOG, PenaltySpec("lq"), PenaltySpec("mcp")):
        res = run_irl1_admm(p, spec, stop=StopRule(delta=1e-7, t_max=40), cfg=TIGHT)
        diffs = np.diff(res.trace.f_values)
        assert np.all(diffs <= 1e-7), spec.kind
        assert kkt_residual(p, res.w_final, res.x_hat) <= 1e-6


def test_inner_cap_carries_partial():
    p, _ = _small_gauss(7)
    cramped = AdmmConfig(rho=1.0, tol_abs=1e-12, tol_rel=1e-12, max_iter=3)
    with pytest.raises(InnerSolveError) as exc:
        run_irl1_admm(p, LOG, stop=StopRule(t_max=5), cfg=cramped)
    partial = exc.value.partial
    assert partial.x_hat.shape == (p.n,)
    assert not partial.converged
    assert partial.trace.outer_iters == 0  # first sweep already capped
    assert partial.trace.inner_iters_total == 3
    assert np.array_equal(partial.w_final, reweight(LOG, partial.x_hat))
    assert "sweep 1" in str(exc.value)


def test_step_ist_hand_example():
    # x = 0, A = I: one step is S_{lam g'(0)}(tau y)
    p = Problem(np.eye(2), np.array([1.0, -1e-4]), 1e-5)
    out = step_ist(p, LOG, np.zeros(2), 0.25)
    assert np.allclose(out, [0.2499, 0.0], atol=1e-18)
    assert out[1] == 0.0


def test_step_ist_zero_fixed_point():
    # thresholds above |tau A^T y| keep the origin fixed
    p = Problem(np.eye(2), np.array([0.5, -0.2]), 1.0)
    z = np.zeros(2)
    once = step_ist(p, LOG, z, 0.2)
    assert np.array_equal(once, z)
    assert np.array_equal(step_ist(p, LOG, once, 0.2), z)


def test_step_ist_matches_primitives():
    p, rng = _small_gauss(8)
    x = rng.standard_normal(p.n) * 0.1
    tau = 0.25
    w = reweight(LOG, x)
    expect = soft_threshold(x + tau * (p.A.T @ (p.y - p.A @ x)), p.lam * w)
    assert np.array_equal(step_ist(p, LOG, x, tau), expect)


def test_ist_step_size_guard():
    p = Problem(2.0 * np.eye(2), np.array([1.0, 1.0]), 0.1)  # ||A||^2 = 4
    with pytest.raises(StepSizeError, match="largest admissible tau is 0.25"):
        run_irl1_ist(p, LOG, tau=0.3)
    with pytest.raises(ValueError):
        run_irl1_ist(p, LOG, tau=0.0)
    # the guard can be lifted explicitly
    res = run_irl1_ist(p, LOG, tau=0.3, stop=StopRule(delta=0.0, t_max=5),
                       enforce_step=False)
    assert res.trace.outer_iters == 5


def test_ist_identity_fixed_point():
    # A = I decouples; an IST limit solves x = y - (lam/tau) g'(|x|) on
    # active coordinates.  The values below iterate that scalar map.
    p = Problem(np.eye(2), np.array([3.0, 0.5]), 1e-5)
    res = run_irl1_ist(p, LOG, tau=0.25, stop=StopRule(delta=1e-13, t_max=500))
    oracle = np.array([2.999987096720486, 0.49993332592427936])
    assert res.converged
    assert np.max(np.abs(res.x_hat - oracle)) < 1e-8


def test_ist_trace_counts_sweeps():
    p, _ = _small_gauss(9, lam=1e-3)
    tau = 0.9 / spectral_norm_sq(p.A)
    res = run_irl1_ist(p, LOG, tau=tau, stop=StopRule(delta=1e-8, t_max=20000))
    t = res.trace
    assert t.inner_iters_total == t.outer_iters  # one step per sweep
    assert t.f_values.shape == (t.outer_iters,)
    assert t.f_values[-1] == biconvex_F(p, LOG, res.x_hat, res.w_final)
    assert res.converged and t.step_norms[-1] < 1e-8
    # the converged iterate moves less than delta under one more step
    nxt = step_ist(p, LOG, res.x_hat, tau)
    assert np.linalg.norm(nxt - res.x_hat) < 1e-8


def test_ist_near_stationarity_of_limit():
    # a converged IST run sits near the weighted-Lasso optimality set of
    # its own final weights, with the lam/tau multiplier scaling
    p, _ = _small_gauss(10, lam=1e-3)
    tau = 0.9 / spectral_norm_sq(p.A)
    res = run_irl1_ist(p, LOG, tau=tau, stop=StopRule(delta=1e-10, t_max=50000))
    assert res.converged
    scaled = Problem(p.A, p.y, p.lam / tau)
    assert kkt_residual(scaled, res.w_final, res.x_hat) < 1e-6


def test_uniform_weight_ist_descends_scaled_lasso():
    # with frozen weights the step is the classical IST update for the
    # (lam c / tau)-Lasso, whose objective it can never increase
    p, rng = _small_gauss(11, lam=1e-3)
    tau = 0.9 / spectral_norm_sq(p.A)
    c = 2.0
    reg = p.lam * c / tau
    x = rng.standard_normal(p.n) * 0.5
    prev = 0.5 * np.linalg.norm(p.y - p.A @ x) ** 2 + reg * np.abs(x).sum()
    for _ in range(500):
        x = soft_threshold(x + tau * (p.A.T @ (p.y - p.A @ x)), p.lam * c)
        cur = 0.5 * np.linalg.norm(p.y - p.A @ x) ** 2 + reg * np.abs(x).sum()
        assert cur <= prev + 1e-12
        prev = cur
