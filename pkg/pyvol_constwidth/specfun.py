"""
Dimensional constants and combinatorics in natural-log space.

Every volume formula in this package mixes binomial coefficients of size
~2^n with ratios of ball volumes that decay like n^{-k/2}; all of them are
carried as logarithms and combined with max-shifted sums.
"""
import math
import numbers

import numpy as np
from scipy.special import gammaln, logsumexp as _scipy_logsumexp

from .exceptions import InvalidDimensionError, InvalidParameterError

LOG_PI = math.log(math.pi)


def check_dimension(n, minimum: int = 1) -> int:
    """
    Return `n` as a python int, or raise `InvalidDimensionError` if it is
    not an integer >= `minimum`. Booleans are rejected.
    """
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < minimum:
        raise InvalidDimensionError(n, minimum)
    return int(n)


class DimensionalConstants:
    """
    Logs of the sphere surface area omega_n and unit-ball volume Omega_n
    in dimension n, with omega_n = n * Omega_n.
    """

    def __init__(self, n: int):
        self.n = check_dimension(n)
        self.log_Omega_n = log_unit_ball_volume(self.n)
        self.log_omega_n = math.log(self.n) + self.log_Omega_n

    @property
    def ball_volume(self) -> float:
        return math.exp(self.log_Omega_n)

    @property
    def sphere_area(self) -> float:
        return math.exp(self.log_omega_n)

    def __str__(self):
        return str(self.to_dict())

    def to_dict(self):
        return {
            "n": self.n,
            "log_omega_n": self.log_omega_n,
            "log_Omega_n": self.log_Omega_n,
        }


def log_unit_ball_volume(n: int) -> float:
    """
    ln Omega_n = (n/2) ln(pi) - ln Gamma(n/2 + 1).
    """
    n = check_dimension(n)
    return 0.5 * n * LOG_PI - float(gammaln(0.5 * n + 1.0))


def log_unit_ball_volumes(n_max: int) -> np.ndarray:
    """
    Vector of ln Omega_j for j = 0..n_max (Omega_0 = 1).
    """
    n_max = check_dimension(n_max, minimum=0)
    j = np.arange(n_max + 1, dtype=float)
    return 0.5 * j * LOG_PI - gammaln(0.5 * j + 1.0)


def log_sphere_area(n: int) -> float:
    return math.log(check_dimension(n)) + log_unit_ball_volume(n)


def log_binomial(n: int, k: int) -> float:
    """
    ln C(n, k) from log-gamma. Evaluated on min(k, n-k) so that
    log_binomial(n, k) == log_binomial(n, n - k) bit for bit.
    """
    n = check_dimension(n)
    if isinstance(k, bool) or not isinstance(k, numbers.Integral) or not 0 <= k <= n:
        raise InvalidParameterError("k={!r} outside [0, {}]".format(k, n))
    k = min(int(k), n - int(k))
    if k == 0:
        return 0.0
    return float(gammaln(n + 1.0) - (gammaln(k + 1.0) + gammaln(n - k + 1.0)))


def log_binomials(n: int) -> np.ndarray:
    """
    Vector of ln C(n, k) for k = 0..n, symmetric like `log_binomial`.
    """
    n = check_dimension(n)
    k = np.arange(n + 1)
    kk = np.minimum(k, n - k).astype(float)
    out = gammaln(n + 1.0) - (gammaln(kk + 1.0) + gammaln(n - kk + 1.0))
    out[kk == 0] = 0.0
    return out


def log_beta(p: float, q: float) -> float:
    """
    ln B(p, q) = ln Gamma(p) + ln Gamma(q) - ln Gamma(p + q).
    """
    if p <= 0 or q <= 0:
        raise InvalidParameterError("beta function needs positive arguments")
    return float(gammaln(p) + gammaln(q) - gammaln(p + q))


def logsumexp(values) -> float:
    """
    Max-shifted ln(sum(exp(values))). An empty input or all -inf terms
    give -inf.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0 or not np.any(np.isfinite(values)):
        return -math.inf
    return float(_scipy_logsumexp(values))
