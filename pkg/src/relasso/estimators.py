"""scikit-learn style estimator wrappers around the functional core.

Each estimator keeps its constructor arguments verbatim (get_params /
set_params / clone behave as usual) and exposes the solver through
fit(X, y) -> self with the recovered coefficients in coef_.  predict is
the plain linear model X @ coef_.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_X_y, check_array, check_is_fitted

from .penalty import PenaltySpec
from .wlasso import Problem, AdmmConfig, solve_admm
from .irl1 import StopRule, run_irl1_admm, run_irl1_ist


class WeightedLasso(RegressorMixin, BaseEstimator):
    """Weighted l1-regularized least squares solved by ADMM.

    Parameters
    ----------
    lam : float, overall regularization strength
    weights : array of per-feature weights, or None for the plain Lasso
    rho, tol_abs, tol_rel, max_iter : inner ADMM settings
    """

    def __init__(self, lam=1.0, weights=None, rho=1.0, tol_abs=1e-8,
                 tol_rel=1e-6, max_iter=200000):
        self.lam = lam
        self.weights = weights
        self.rho = rho
        self.tol_abs = tol_abs
        self.tol_rel = tol_rel
        self.max_iter = max_iter

    def _config(self):
        return AdmmConfig(rho=self.rho, tol_abs=self.tol_abs,
                          tol_rel=self.tol_rel, max_iter=self.max_iter)

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        w = np.ones(X.shape[1]) if self.weights is None else \
            check_array(self.weights, ensure_2d=False)
        if w.shape[0] != X.shape[1]:
            raise ValueError("weights length must equal n_features")
        sol = solve_admm(Problem(X, y, self.lam), w, self._config())
        self.coef_ = sol.x
        self.n_iter_ = sol.iters
        self.primal_res_ = sol.primal_res
        self.dual_res_ = sol.dual_res
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return X @ self.coef_


class _ReweightedBase(RegressorMixin, BaseEstimator):
    def _spec(self):
        return PenaltySpec(self.penalty, eps=self.eps, q=self.q,
                           alpha=self.alpha,
                           beta=self.alpha if self.penalty == "mcp" else self.beta)

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return X @ self.coef_

    def _finish(self, res):
        self.coef_ = res.x_hat
        self.weights_ = res.w_final
        self.converged_ = res.converged
        self.n_outer_ = res.trace.outer_iters
        self.n_inner_total_ = res.trace.inner_iters_total
        self.f_values_ = res.trace.f_values
        return self


class ReweightedLasso(_ReweightedBase):
    """Concave-penalized Lasso via iterative l1 reweighting (inner ADMM)."""

    def __init__(self, penalty="log", lam=1e-5, eps=0.1, q=0.5, alpha=2.0,
                 beta=1e3, delta=1e-5, max_outer=100, rho=1.0, tol_abs=1e-8,
                 tol_rel=1e-6, max_iter=200000):
        self.penalty = penalty
        self.lam = lam
        self.eps = eps
        self.q = q
        self.alpha = alpha
        self.beta = beta
        self.delta = delta
        self.max_outer = max_outer
        self.rho = rho
        self.tol_abs = tol_abs
        self.tol_rel = tol_rel
        self.max_iter = max_iter

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        res = run_irl1_admm(
            Problem(X, y, self.lam), self._spec(),
            stop=StopRule(self.delta, self.max_outer),
            cfg=AdmmConfig(rho=self.rho, tol_abs=self.tol_abs,
                           tol_rel=self.tol_rel, max_iter=self.max_iter))
        return self._finish(res)


class ReweightedLassoIST(_ReweightedBase):
    """Reweighted iterative soft thresholding (single-step variant).

    enforce_step validates tau * ||X||_2^2 < 1 before iterating; pass
    False to run outside the guaranteed-descent regime.
    """

    def __init__(self, penalty="log", lam=1e-5, eps=0.1, q=0.5, alpha=2.0,
                 beta=1e3, tau=0.25, delta=1e-5, max_outer=100000,
                 enforce_step=True):
        self.penalty = penalty
        self.lam = lam
        self.eps = eps
        self.q = q
        self.alpha = alpha
        self.beta = beta
        self.tau = tau
        self.delta = delta
        self.max_outer = max_outer
        self.enforce_step = enforce_step

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        res = run_irl1_ist(
            Problem(X, y, self.lam), self._spec(), tau=self.tau,
            stop=StopRule(self.delta, self.max_outer),
            enforce_step=self.enforce_step)
        return self._finish(res)
