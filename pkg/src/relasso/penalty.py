"""Concave sparsity penalties and their reweighting machinery.

Three penalty families are supported, each acting on s = |x_i|:

  log:  g(s) = log(s + eps)
  lq:   g(s) = (s + eps)^q          with 0 < q < 1
  mcp:  g(s) = alpha*s - s^2/2      on [0, alpha]

Every family carries the derivative g' (the reweighting function), a
convex companion h with h' = -(g')^{-1}, and a box [w_min, w_max] that
contains every admissible weight.  The integration constant of h is
fixed to 0; only differences of the combined objective matter.
"""

import numpy as np
from dataclasses import dataclass

KINDS = ("log", "lq", "mcp")

# relative slack for the weight-box membership tests
_BOX_TOL = 1e-12


@dataclass(frozen=True)
class PenaltySpec:
    """Parameters of one concave penalty.

    kind   : "log", "lq" or "mcp"
    eps    : offset of the log / lq penalties (> 0)
    q      : exponent of the lq penalty, in (0, 1)
    alpha  : mcp shape parameter (> 0)
    beta   : bound of the iterate box [-beta, beta]^n; for mcp this is
             forced to alpha, elsewhere it defaults to 1e3
    """

    kind: str
    eps: float = 0.1
    q: float = 0.5
    alpha: float = 2.0
    beta: float = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown penalty kind {self.kind!r}, expected one of {KINDS}")
        if self.kind in ("log", "lq") and not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.kind == "lq" and not 0.0 < self.q < 1.0:
            raise ValueError("q must lie in (0, 1)")
        if self.kind == "mcp":
            if not self.alpha > 0:
                raise ValueError("alpha must be positive")
            if self.beta is None:
                object.__setattr__(self, "beta", float(self.alpha))
            elif self.beta != self.alpha:
                raise ValueError("mcp requires beta = alpha (the penalty lives on [0, alpha])")
        elif self.beta is None:
            object.__setattr__(self, "beta", 1e3)
        if not self.beta > 0:
            raise ValueError("beta must be positive")


def _check_s(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("penalty argument s must be nonnegative")
    return s


def g_value(spec, s):
    """Penalty value g(s) for s = |x_i| >= 0 (mcp clamps s at alpha)."""
    s = _check_s(s)
    if spec.kind == "log":
        out = np.log(s + spec.eps)
    elif spec.kind == "lq":
        out = (s + spec.eps) ** spec.q
    else:
        sc = np.minimum(s, spec.alpha)
        out = spec.alpha * sc - 0.5 * sc * sc
    return out if out.ndim else float(out)


def weight(spec, s):
    """Reweighting function g'(s), clamped so the result stays in the box.

    The right derivative is used at s = 0.  Arguments beyond beta are
    clamped (iterates may transiently leave the box).
    """
    s = _check_s(s)
    s = np.minimum(s, spec.beta)
    if spec.kind == "log":
        out = 1.0 / (s + spec.eps)
    elif spec.kind == "lq":
        out = spec.q * (s + spec.eps) ** (spec.q - 1.0)
    else:
        out = spec.alpha - s
    return out if out.ndim else float(out)


def _bounds_check(spec, w, lo, hi):
    w = np.asarray(w, dtype=float)
    tol = _BOX_TOL * (1.0 + hi)
    if np.any(w < lo - tol) or np.any(w > hi + tol):
        raise ValueError(f"weight outside the admissible box [{lo:.6g}, {hi:.6g}]")
    if spec.kind in ("log", "lq") and np.any(w <= 0):
        raise ValueError("weights must be positive for log/lq penalties")
    return w


def h_value(spec, w):
    """Convex companion h(w) with h' = -(g')^{-1}, integration constant 0."""
    lo, hi = weight_bounds(spec)
    w = _bounds_check(spec, w, lo, hi)
    if spec.kind == "log":
        out = spec.eps * w - np.log(w)
    elif spec.kind == "lq":
        ex = -spec.q / (1.0 - spec.q)
        out = spec.eps * w + (1.0 - spec.q) * (w / spec.q) ** ex
    else:
        out = 0.5 * (spec.alpha - w) ** 2
    return out if out.ndim else float(out)


def h_prime(spec, w):
    """h'(w) = -(g')^{-1}(w); satisfies weight(spec, -h_prime(spec, w)) = w."""
    lo, hi = weight_bounds(spec)
    w = _bounds_check(spec, w, lo, hi)
    if spec.kind == "log":
        out = spec.eps - 1.0 / w
    elif spec.kind == "lq":
        out = spec.eps - (spec.q / w) ** (1.0 / (1.0 - spec.q))
    else:
        out = w - spec.alpha
    return out if out.ndim else float(out)


def weight_bounds(spec):
    """Scalar interval (w_min, w_max) whose n-fold product is the weight box.

    w_min = weight(spec, beta) and w_max = weight(spec, 0).
    """
    if spec.kind == "log":
        return 1.0 / (spec.beta + spec.eps), 1.0 / spec.eps
    if spec.kind == "lq":
        return (spec.q / (spec.beta + spec.eps) ** (1.0 - spec.q),
                spec.q / spec.eps ** (1.0 - spec.q))
    return 0.0, spec.alpha
