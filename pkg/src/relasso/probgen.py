"""Seeded synthetic compressed-sensing instances.

A is i.i.d. Gaussian N(0, 1/m), the support of the ground truth is
uniform without replacement, nonzero values are standard Gaussian, and
optional additive noise is calibrated to a target measurement-domain
SNR in dB.  Generation is a pure function of the spec: the same seed
always reproduces the same Instance bit for bit.  The underlying
generator is counter-based (numpy Philox) so streams are reproducible
across platforms; its identifier travels with every benchmark record.
"""

import math
import numpy as np
from dataclasses import dataclass

RNG_ID = "philox4x64"


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    m: int
    k: int
    snr_db: float = None  # None (or +inf) means noise-free
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"sparsity k={self.k} must lie in [0, n={self.n}]")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class Instance:
    A: np.ndarray
    x_true: np.ndarray
    y: np.ndarray
    noise: np.ndarray
    seed: int


def gen_instance(spec):
    """Draw one instance; construction order (A, support, values, noise) is fixed."""
    rng = np.random.Generator(np.random.Philox(key=spec.seed))
    A = rng.normal(0.0, math.sqrt(1.0 / spec.m), size=(spec.m, spec.n))
    support = np.sort(rng.choice(spec.n, size=spec.k, replace=False))
    x_true = np.zeros(spec.n)
    x_true[support] = rng.standard_normal(spec.k)
    clean = A @ x_true
    if spec.snr_db is None or math.isinf(spec.snr_db):
        noise = np.zeros(spec.m)
    else:
        noise = add_noise_snr(clean, spec.snr_db, rng)
    return Instance(A, x_true, clean + noise, noise, spec.seed)


def add_noise_snr(clean, snr_db, rng):
    """Gaussian noise vector sized for a target SNR in dB.

    The per-measurement variance is sigma^2 = ||clean||^2 / (m * 10^(snr/10)),
    so the expected power ratio ||clean||^2 / ||e||^2 equals 10^(snr/10).
    An infinite snr_db yields the zero vector.
    """
    clean = np.asarray(clean, dtype=float)
    if math.isinf(snr_db):
        return np.zeros(clean.shape[0])
    power = float(clean @ clean)
    if power == 0.0:
        raise ValueError("clean signal is zero: SNR-calibrated noise is undefined")
    sigma = math.sqrt(power / (clean.shape[0] * 10.0 ** (snr_db / 10.0)))
    return rng.normal(0.0, sigma, size=clean.shape[0])
