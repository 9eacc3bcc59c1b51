"""Self-contained invariant suites, runnable via the check subcommand.

Each suite is a callable that raises CheckFailure on the first violated
property.  Sampling is seeded, so a pass is reproducible; failures name
the offending quantity and its value.
"""

import numpy as np

from . import linalg, penalty, probgen
from .penalty import PenaltySpec
from .wlasso import Problem, AdmmConfig, XUpdateCache, kkt_residual, solve_admm
from .irl1 import StopRule, biconvex_F, reweight, run_irl1_admm

_KINDS = ("log", "lq", "mcp")


class CheckFailure(AssertionError):
    """An invariant suite found a counterexample."""


def _fail(msg):
    raise CheckFailure(msg)


def _interior_weights(spec, rng, count):
    lo, hi = penalty.weight_bounds(spec)
    u = rng.uniform(0.01, 0.99, size=count)
    return lo + u * (hi - lo)


def check_penalty_inverse_identity():
    """g'(-h'(w)) = w on the interior of the weight box, all penalties."""
    rng = np.random.default_rng(11)
    for kind in _KINDS:
        spec = PenaltySpec(kind)
        for w in _interior_weights(spec, rng, 100):
            s = -penalty.h_prime(spec, w)
            back = penalty.weight(spec, s)
            if not abs(back - w) < 1e-10:
                _fail(f"inverse identity broken for {kind}: "
                      f"w={w!r}, g'(-h'(w))={back!r}")


def check_penalty_shape():
    """weight decreasing, h convex, weight matches a finite difference of g."""
    rng = np.random.default_rng(12)
    for kind in _KINDS:
        spec = PenaltySpec(kind)
        s_hi = spec.alpha if kind == "mcp" else 10.0
        s = np.sort(rng.uniform(0.0, s_hi * 0.999, size=60))
        w = penalty.weight(spec, s)
        if not np.all(np.diff(w) <= 1e-12):
            _fail(f"weights not non-increasing in s for {kind}")
        lo, hi = penalty.weight_bounds(spec)
        ws = np.sort(_interior_weights(spec, rng, 60))
        hp = np.array([penalty.h_prime(spec, wi) for wi in ws])
        if not np.all(np.diff(hp) > 0):
            _fail(f"h' not strictly increasing for {kind} (h not convex)")
        for si in rng.uniform(0.05, s_hi * 0.9, size=40):
            d = 1e-6
            fd = (penalty.g_value(spec, si + d) - penalty.g_value(spec, si - d)) / (2 * d)
            if not abs(fd - penalty.weight(spec, si)) < 1e-6:
                _fail(f"finite difference of g disagrees with weight for "
                      f"{kind} at s={si!r}")


def check_linalg_adjoint():
    """<Av, u> = <v, A^T u>; soft threshold shrinks toward zero."""
    rng = np.random.default_rng(13)
    for _ in range(50):
        m, n = rng.integers(2, 30, size=2)
        A = rng.standard_normal((m, n))
        v = rng.standard_normal(n)
        u = rng.standard_normal(m)
        lhs = float(linalg.matvec(A, v) @ u)
        rhs = float(v @ linalg.matvec_t(A, u))
        if not abs(lhs - rhs) < 1e-8 * (1 + abs(lhs)):
            _fail(f"adjoint identity violated: {lhs!r} vs {rhs!r}")
    z = rng.standard_normal(200) * 3
    th = rng.uniform(0, 2, size=200)
    s = linalg.soft_threshold(z, th)
    if not np.all(np.abs(s) <= np.maximum(np.abs(z) - th, 0.0) + 1e-15):
        _fail("soft threshold exceeds shrinkage bound")
    if not np.all(s * z >= 0):
        _fail("soft threshold flipped a sign")


def check_linalg_spectral():
    """Power iteration agrees with the SVD on random dense matrices."""
    rng = np.random.default_rng(14)
    for _ in range(25):
        m, n = rng.integers(2, 40, size=2)
        A = rng.standard_normal((m, n))
        est = linalg.spectral_norm_sq(A)
        ref = float(np.linalg.norm(A, 2) ** 2)
        if not abs(est - ref) < 1e-6 * ref:
            _fail(f"spectral norm estimate {est!r} vs SVD {ref!r}")


def check_wlasso_optimality():
    """ADMM solutions satisfy the weighted-lasso KKT conditions."""
    rng = np.random.default_rng(15)
    for _ in range(20):
        m, n = 20, 50
        A = rng.standard_normal((m, n)) / np.sqrt(m)
        x0 = np.zeros(n)
        x0[rng.choice(n, size=5, replace=False)] = rng.standard_normal(5)
        y = A @ x0 + 0.01 * rng.standard_normal(m)
        w = rng.uniform(0.2, 2.0, size=n)
        p = Problem(A, y, 0.05)
        sol = solve_admm(p, w)
        r = kkt_residual(p, w, sol.x)
        if not r <= 1e-6:
            _fail(f"kkt residual {r!r} above 1e-6")
    # orthonormal columns (A^T A = I): closed form S_{lam w}(A^T y)
    A, _ = np.linalg.qr(rng.standard_normal((30, 20)))
    y = rng.standard_normal(30)
    w = rng.uniform(0.2, 2.0, size=20)
    p = Problem(A, y, 0.3)
    sol = solve_admm(p, w)
    ref = linalg.soft_threshold(A.T @ y, p.lam * w)
    err = float(np.max(np.abs(sol.x - ref)))
    if not err < 1e-8:
        _fail(f"orthonormal closed form missed by {err!r}")


def check_wlasso_scaling():
    """Scaling (y, lam) by c scales the solution by c."""
    rng = np.random.default_rng(16)
    A = rng.standard_normal((15, 40)) / np.sqrt(15)
    y = rng.standard_normal(15)
    w = rng.uniform(0.5, 1.5, size=40)
    cfg = AdmmConfig(tol_abs=1e-10, tol_rel=1e-8)
    base = solve_admm(Problem(A, y, 0.02), w, cfg).x
    for c in (0.5, 3.0):
        scaled = solve_admm(Problem(A, c * y, c * 0.02), w, cfg).x
        err = float(np.max(np.abs(scaled - c * base)))
        if not err < 1e-6:
            _fail(f"scaling consistency missed by {err!r} at c={c}")


def check_probgen_reproducibility():
    """Identical specs yield identical instances; support size is exact."""
    for seed in (0, 7, 12345):
        spec = probgen.InstanceSpec(n=64, m=32, k=9, snr_db=None, seed=seed)
        a = probgen.gen_instance(spec)
        b = probgen.gen_instance(spec)
        if not (np.array_equal(a.A, b.A) and np.array_equal(a.y, b.y)
                and np.array_equal(a.x_true, b.x_true)):
            _fail(f"instance generation not reproducible at seed {seed}")
        if int(np.count_nonzero(a.x_true)) != 9:
            _fail(f"support size {np.count_nonzero(a.x_true)} != 9")
        if not np.all(a.noise == 0):
            _fail("noise-free instance has nonzero noise")
        if not np.array_equal(a.y, a.A @ a.x_true):
            _fail("noise-free measurements differ from A x_true")
    noisy = probgen.gen_instance(
        probgen.InstanceSpec(n=64, m=32, k=9, snr_db=20.0, seed=3))
    if np.all(noisy.noise == 0):
        _fail("noisy instance has zero noise")


def check_irl1_descent():
    """F decreases along the exact-solve driver; its fixed point is
    partial-optimal; reweighting minimizes F over the weight block."""
    rng = np.random.default_rng(17)
    m, n = 30, 80
    A = rng.standard_normal((m, n)) / np.sqrt(m)
    x0 = np.zeros(n)
    x0[rng.choice(n, size=6, replace=False)] = rng.standard_normal(6)
    y = A @ x0
    p = Problem(A, y, 1e-4)
    for kind in _KINDS:
        spec = PenaltySpec(kind)
        res = run_irl1_admm(p, spec, stop=StopRule(1e-7, 40))
        f = np.asarray(res.trace.f_values)
        if not np.all(np.diff(f) <= 1e-7):
            _fail(f"inner-ADMM driver increased F for {kind}")
        # partial optimality: w block exact by construction, x block by KKT
        if not np.array_equal(res.w_final, reweight(spec, res.x_hat)):
            _fail(f"final weights are not the reweighting of x_hat ({kind})")
        r = kkt_residual(p, res.w_final, res.x_hat)
        if not r <= 1e-6:
            _fail(f"x_hat not optimal for the final weights ({kind}), "
                  f"kkt={r!r}")
        # w = reweight(x) minimizes F(x, .) over the weight box
        x = res.x_hat
        base = biconvex_F(p, spec, x, reweight(spec, x))
        lo, hi = penalty.weight_bounds(spec)
        for _ in range(100):
            w = lo + rng.uniform(0.001, 0.999, size=n) * (hi - lo)
            if biconvex_F(p, spec, x, w) < base - 1e-10:
                _fail(f"reweight(x) is not the weight-block minimizer ({kind})")


def check_ist_prox_descent():
    """The thresholding step with fixed uniform weights is classical IST:
    it monotonically decreases the lasso objective it is the prox step
    of (regularization lam*c/tau) whenever tau*||A||_2^2 < 1."""
    rng = np.random.default_rng(18)
    m, n = 25, 60
    A = rng.standard_normal((m, n)) / np.sqrt(m)
    xt = np.zeros(n)
    xt[rng.choice(n, size=5, replace=False)] = rng.standard_normal(5)
    y = A @ xt + 0.05 * rng.standard_normal(m)
    lam, c = 1e-3, 2.0
    tau = 0.9 / linalg.spectral_norm_sq(A)
    reg = lam * c / tau
    obj = lambda x: 0.5 * np.sum((y - A @ x) ** 2) + reg * np.sum(np.abs(x))
    x = np.zeros(n)
    prev = obj(x)
    for t in range(3000):
        x = linalg.soft_threshold(x + tau * (A.T @ (y - A @ x)), lam * c)
        cur = obj(x)
        if cur > prev + 1e-12:
            _fail(f"uniform-weight IST increased its lasso objective at "
                  f"step {t}: {prev!r} -> {cur!r}")
        prev = cur


SUITES = {
    "penalty-inverse-identity": check_penalty_inverse_identity,
    "penalty-shape": check_penalty_shape,
    "linalg-adjoint": check_linalg_adjoint,
    "linalg-spectral": check_linalg_spectral,
    "wlasso-optimality": check_wlasso_optimality,
    "wlasso-scaling": check_wlasso_scaling,
    "probgen-reproducibility": check_probgen_reproducibility,
    "irl1-descent": check_irl1_descent,
    "ist-prox-descent": check_ist_prox_descent,
}


def run_suites(names=None):
    """Run the named suites (all by default).

    Returns a list of (name, passed, message) triples in registry order.
    Unknown names raise ValueError.
    """
    if names:
        unknown = [s for s in names if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suites: {unknown}")
        selected = [s for s in SUITES if s in set(names)]
    else:
        selected = list(SUITES)
    results = []
    for name in selected:
        try:
            SUITES[name]()
        except CheckFailure as e:
            results.append((name, False, str(e)))
        else:
            results.append((name, True, ""))
    return results
