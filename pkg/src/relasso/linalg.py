"""Small dense linear-algebra kernel used by the solvers.

Everything is plain float64 numpy.  Matrices are 2-d arrays (row-major),
vectors are 1-d arrays.
"""

import numpy as np
from scipy.linalg import cho_factor, cho_solve


class PowerIterationError(RuntimeError):
    """Power iteration failed to converge; carries the last estimate."""

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate


def _as_matrix(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("expected a 2-d array")
    return A


def _as_vector(v, length=None, name="vector"):
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-d")
    if length is not None and v.shape[0] != length:
        raise ValueError(f"{name} has length {v.shape[0]}, expected {length}")
    return v


def matvec(A, v):
    """Dense product A v."""
    A = _as_matrix(A)
    v = _as_vector(v, A.shape[1])
    return A @ v


def matvec_t(A, v):
    """Dense product A^T v."""
    A = _as_matrix(A)
    v = _as_vector(v, A.shape[0])
    return A.T @ v


def soft_threshold(z, theta):
    """Componentwise shrinkage sign(z_i) * max(|z_i| - theta_i, 0).

    theta may be a scalar or a vector of nonnegative thresholds.
    """
    z = np.asarray(z, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if theta.ndim and theta.shape != z.shape:
        raise ValueError("threshold vector length must match z")
    if np.any(theta < 0):
        raise ValueError("thresholds must be nonnegative")
    return np.sign(z) * np.maximum(np.abs(z) - theta, 0.0)


def spectral_norm_sq(A, tol=1e-9, max_iter=5000):
    """Largest squared singular value ||A||_2^2 via power iteration.

    The iteration runs on the smaller of A^T A and A A^T with a
    deterministic all-ones start vector; successive Rayleigh quotients
    are non-decreasing, and the loop stops when their relative change
    falls below tol.  Raises PowerIterationError (carrying the last
    estimate) if max_iter is exhausted.
    """
    A = _as_matrix(A)
    if not np.any(A):
        raise ValueError("spectral norm of the zero matrix is not estimated")
    m, n = A.shape
    # gram of the smaller dimension keeps the per-step cost down
    if m <= n:
        G = A @ A.T
        d = m
    else:
        G = A.T @ A
        d = n
    v = np.ones(d) / np.sqrt(d)
    est = 0.0
    for _ in range(max_iter):
        Gv = G @ v
        nrm = np.linalg.norm(Gv)
        if nrm == 0.0:
            raise ValueError("start vector lies in the null space")
        new = float(v @ Gv)  # Rayleigh quotient of G = eigenvalue estimate
        v = Gv / nrm
        if new > 0 and abs(new - est) <= tol * new:
            return new
        est = new
    raise PowerIterationError(
        f"power iteration did not reach rel. tol {tol:g} in {max_iter} steps", est)


def spd_factor(M):
    """Cholesky factor of a symmetric positive definite matrix."""
    M = _as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(M, M.T, rtol=1e-10, atol=1e-12):
        raise ValueError("matrix must be symmetric")
    return cho_factor(M, lower=True)


def spd_solve(factor, b):
    """Solve M x = b for one or many right-hand sides of a spd_factor."""
    return cho_solve(factor, np.asarray(b, dtype=float))
