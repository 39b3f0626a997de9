"""
Volume of M: exact (quadrature over the disk segment, summed over
orthant types) and randomized (rejection sampling, radial estimator).

Vol(M) = Omega_n / 2^n * ( sqrt(2)^n + (2 - sqrt(2))^n
          + sum_k k (n-k) C(n,k) Omega_k Omega_{n-k} / Omega_n * I(k, n) )
with I(k, n) the integral of a^(k-1) b^(n-k-1) over A. The orthant sum is
an equality here, not just a bound: membership in M is exactly
characterised by (|v_+|, |v_-|) in A, so each (k, n-k) orthant piece is
the product-of-shells integral over A.
"""
import functools
import logging
import math

import numpy as np
from scipy.stats import binomtest, norm

from . import bounds
from .body import (
    DEFAULT_TOL,
    SQRT2,
    TWO_MINUS_SQRT2,
    BodySpec,
    contains,
    radial_extent,
    sample_unit_vectors,
)
from .datamodel import MomentIntegral, OrthantTerm, RadiusRow, VolumeResult
from .exceptions import (
    DegenerateSampleError,
    InvalidParameterError,
    handle_numeric_exception,
)
from .quadrature import DEFAULT_ORDER, DEFAULT_REL_TOL, DEFAULT_MAX_PANELS, adaptive_log_quad
from .rng import SeededRNG, chunk_sizes
from .specfun import check_dimension, log_binomials, log_unit_ball_volume, log_unit_ball_volumes, logsumexp

logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)
LOG_SQRT2 = 0.5 * LOG2
LOG_TWO_MINUS_SQRT2 = math.log(TWO_MINUS_SQRT2)
PHI_MAX = math.pi / 4.0
CI_LEVEL = 0.95
DEFAULT_CHUNK = 100_000
MC_REJECTION_MAX_N = 25
RADIAL_MIN_ESS = 1000
RADIUS_THRESHOLD = 0.9


def _moment_log_integrand(n: int, ks: np.ndarray):
    """
    ln of the moment integrand after b + sqrt(2) = 2 cos(phi):
    (k+1) ln(2 sin phi) + (n-k-1) ln(2 cos phi - sqrt(2)) - ln k, one row per k.
    """
    ks = np.asarray(ks, dtype=float)[:, None]
    log_k = np.log(ks)

    def log_f(phi):
        log_a = np.log(2.0 * np.sin(phi))
        # 2 cos(phi) - 2 cos(pi/4) without cancellation
        b = 4.0 * np.sin(0.5 * (phi + PHI_MAX)) * np.sin(0.5 * (PHI_MAX - phi))
        log_b = np.log(b)
        return (ks + 1.0) * log_a + (n - ks - 1.0) * log_b - log_k

    return log_f


@functools.lru_cache(maxsize=256)
def _moment_logs(n: int, rel_tol: float, order: int, max_panels: int):
    ks = np.arange(1, n)
    res = adaptive_log_quad(
        _moment_log_integrand(n, ks),
        0.0,
        PHI_MAX,
        order=order,
        rel_tol=rel_tol,
        max_panels=max_panels,
        label="moments n={}".format(n),
    )
    log_values = res.log_values.copy()
    rel_errors = res.rel_errors.copy()
    log_values.flags.writeable = False
    rel_errors.flags.writeable = False
    return log_values, rel_errors, res.panels


def moment_integrals(n: int, rel_tol: float = DEFAULT_REL_TOL, order: int = DEFAULT_ORDER, max_panels: int = DEFAULT_MAX_PANELS) -> list:
    """
    `MomentIntegral` for every k in 1..n-1, computed on one shared set of
    adaptive panels (every k must meet `rel_tol`).
    """
    n = check_dimension(n, minimum=2)
    log_values, rel_errors, panels = _moment_logs(n, rel_tol, order, max_panels)
    return [
        MomentIntegral(k, n, log_values[k - 1], rel_errors[k - 1], panels)
        for k in range(1, n)
    ]


def moment_integral(k: int, n: int, rel_tol: float = DEFAULT_REL_TOL, order: int = DEFAULT_ORDER, max_panels: int = DEFAULT_MAX_PANELS) -> MomentIntegral:
    """
    ln of the integral of a^(k-1) b^(n-k-1) over A, reduced to one
    dimension: (1/k) * integral over b in [0, 2 - sqrt(2)] of
    (4 - (b + sqrt(2))^2)^(k/2) b^(n-k-1).
    """
    n = check_dimension(n, minimum=2)
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= n - 1:
        raise InvalidParameterError("k={!r} outside [1, {}]".format(k, n - 1))
    k = int(k)
    res = adaptive_log_quad(
        _moment_log_integrand(n, np.array([k])),
        0.0,
        PHI_MAX,
        order=order,
        rel_tol=rel_tol,
        max_panels=max_panels,
        label="moment k={} n={}".format(k, n),
    )
    return MomentIntegral(k, n, res.log_values[0], res.rel_errors[0], res.panels)


def orthant_breakdown(n: int, rel_tol: float = DEFAULT_REL_TOL) -> list:
    """
    One `OrthantTerm` per orthant type (k positive, n-k negative
    coordinates), k = 0..n. Their `log_total`s sum (in log space) to the
    log volume of M.
    """
    n = check_dimension(n, minimum=2)
    log_Omega = log_unit_ball_volumes(n)
    log_counts = log_binomials(n)
    base = log_Omega[n] - n * LOG2
    terms = [OrthantTerm(0, n, 0.0, base + n * LOG_TWO_MINUS_SQRT2)]
    log_moments, _, _ = _moment_logs(n, rel_tol, DEFAULT_ORDER, DEFAULT_MAX_PANELS)
    for k in range(1, n):
        # k (n-k) Omega_k Omega_{n-k} / 2^n * I(k, n)
        piece = (
            math.log(k)
            + math.log(n - k)
            + log_Omega[k]
            + log_Omega[n - k]
            - n * LOG2
            + log_moments[k - 1]
        )
        terms.append(OrthantTerm(k, n, log_counts[k], piece))
    terms.append(OrthantTerm(n, n, 0.0, base + n * LOG_SQRT2))
    return terms


def _result_from_log(n: int, log_volume: float, method: str, **kwargs) -> VolumeResult:
    log_Omega_n = log_unit_ball_volume(n)
    r = math.exp((log_volume - log_Omega_n) / n)
    return VolumeResult(n, log_volume, r, method, **kwargs)


@handle_numeric_exception
def exact_volume(n: int, rel_tol: float = DEFAULT_REL_TOL) -> VolumeResult:
    """
    Volume of M by quadrature and the orthant decomposition.
    """
    n = check_dimension(n, minimum=2)
    terms = orthant_breakdown(n, rel_tol)
    log_volume = logsumexp([t.log_total for t in terms])
    _, rel_errors, panels = _moment_logs(n, rel_tol, DEFAULT_ORDER, DEFAULT_MAX_PANELS)
    logger.debug("exact volume n=%d: log V=%.15g (%d panels)", n, log_volume, panels)
    return _result_from_log(n, log_volume, "quadrature", est_abs_error=float(np.max(rel_errors)))


def _check_mc_args(n: int, samples: int, minimum_samples: int = 1) -> int:
    n = check_dimension(n, minimum=2)
    if isinstance(samples, bool) or int(samples) != samples or samples < minimum_samples:
        raise InvalidParameterError(
            "samples must be an integer >= {} (got {!r})".format(minimum_samples, samples)
        )
    return n


@handle_numeric_exception
def mc_volume(n: int, samples: int, seed: int = 0, chunk_size: int = DEFAULT_CHUNK, tol: float = DEFAULT_TOL) -> VolumeResult:
    """
    Rejection estimate of Vol(M): uniform points in sqrt(2) B^n, hit test by
    `contains`, Wilson 95% interval on the hit fraction.

    The acceptance rate is (r_n / sqrt(2))^n, which decays geometrically;
    beyond n ~ 25 the hit count is too small to be useful and
    `mc_volume_radial` should be used instead.
    """
    n = _check_mc_args(n, samples)
    if n > MC_REJECTION_MAX_N:
        logger.warning("rejection sampling in R^%d: acceptance rate is tiny, prefer mc_volume_radial", n)
    spec = BodySpec(n)
    sizes = chunk_sizes(samples, chunk_size)
    hits = 0
    for child, size in zip(SeededRNG(seed).spawn(len(sizes)), sizes):
        g = child.generator
        directions = sample_unit_vectors(g, size, n)
        # radius sqrt(2) U^(1/n), via logs so large n stays accurate
        radius = np.exp(np.log(g.random(size)) / n + LOG_SQRT2)
        hits += int(np.count_nonzero(contains(spec, directions * radius[:, None], tol)))
    if hits == 0:
        raise DegenerateSampleError(
            "no hits in {} samples for n={}; confidence interval is degenerate".format(samples, n)
        )
    ci = binomtest(hits, samples).proportion_ci(confidence_level=CI_LEVEL, method="wilson")
    log_box = log_unit_ball_volume(n) + n * LOG_SQRT2
    logger.debug("mc_volume n=%d: %d hits of %d (seed %s)", n, hits, samples, seed)
    return _result_from_log(
        n,
        math.log(hits / samples) + log_box,
        "mc_rejection",
        log_ci_low=math.log(ci.low) + log_box,
        log_ci_high=math.log(ci.high) + log_box,
        samples=int(samples),
        seed=seed,
    )


@handle_numeric_exception
def mc_volume_radial(n: int, samples: int, seed: int = 0, chunk_size: int = DEFAULT_CHUNK, direction_sampler=None) -> VolumeResult:
    """
    Radial estimate Vol(M) = Omega_n * E[rho(U)^n] over uniform unit U.
    The 95% interval is the CLT interval on the mean carried to the log
    estimate by the delta method.

    rho lies in [2 - sqrt(2), sqrt(2)] and the weights are summed in log
    space, but the spread of rho(U)^n grows with n and for large n a few
    directions carry the whole mean. The effective sample size
    (sum y)^2 / sum y^2 of the weights is logged, with a warning below
    RADIAL_MIN_ESS where the interval is no longer trustworthy.

    `direction_sampler(generator, count, n)` replaces the uniform sphere
    sampler; it exists for testing the accumulator.
    """
    n = _check_mc_args(n, samples, minimum_samples=2)
    spec = BodySpec(n)
    sampler = direction_sampler or sample_unit_vectors
    sizes = chunk_sizes(samples, chunk_size)
    log_terms = []
    for child, size in zip(SeededRNG(seed).spawn(len(sizes)), sizes):
        u = sampler(child.generator, size, n)
        log_terms.append(n * np.log(radial_extent(spec, u)))
    log_terms = np.concatenate(log_terms)
    shift = float(np.max(log_terms))
    y = np.exp(log_terms - shift)
    mean = float(np.mean(y))
    std = float(np.std(y, ddof=1))
    ess = float(np.sum(y)) ** 2 / float(np.sum(y * y))
    if ess < RADIAL_MIN_ESS:
        logger.warning(
            "radial estimate in R^%d rests on an effective sample size of %.1f of %d; "
            "its interval understates the error, prefer quadrature",
            n, ess, samples,
        )
    half = norm.ppf(0.5 + 0.5 * CI_LEVEL) * std / (mean * math.sqrt(samples))
    log_volume = log_unit_ball_volume(n) + shift + math.log(mean)
    logger.debug("mc_volume_radial n=%d: %d samples, ess %.1f (seed %s)", n, samples, ess, seed)
    return _result_from_log(
        n,
        log_volume,
        "mc_radial",
        log_ci_low=log_volume - half,
        log_ci_high=log_volume + half,
        samples=int(samples),
        seed=seed,
    )


class RadiusTable(list):
    """
    List of `RadiusRow`s plus the smallest computed n from which every
    computed row has r_n < 0.9. The threshold is an empirical property
    of the rows computed, not a proven constant.
    """

    def __init__(self, rows):
        super().__init__(rows)
        self.threshold = effective_threshold(self)

    def to_dict(self):
        return {
            "rows": [r.to_dict() for r in self],
            "threshold_n": self.threshold,
        }


def radius_row(n: int, rel_tol: float = DEFAULT_REL_TOL) -> RadiusRow:
    res = exact_volume(n, rel_tol)
    return RadiusRow(
        n,
        res.effective_radius,
        bounds.schramm_lower_bound(n),
        bounds.best_triangle_upper_bound(n),
        res.log_volume,
    )


def radius_table(n_from: int, n_to: int, step: int = 1, rel_tol: float = DEFAULT_REL_TOL) -> RadiusTable:
    """
    Effective radius of M for n = n_from, n_from + step, ..., n_to (n_to
    is always included), next to the Schramm lower bound and the
    triangle upper bound (1/2)(n+1)^(1/n) s.
    """
    n_from = check_dimension(n_from, minimum=2)
    n_to = check_dimension(n_to, minimum=2)
    if n_to < n_from:
        raise InvalidParameterError("n_to must be >= n_from")
    if isinstance(step, bool) or int(step) != step or step < 1:
        raise InvalidParameterError("step must be a positive integer")
    ns = list(range(n_from, n_to + 1, int(step)))
    if ns[-1] != n_to:
        ns.append(n_to)
    rows = [radius_row(n, rel_tol) for n in ns]
    logger.info("radius table: %d rows for n in [%d, %d]", len(rows), n_from, n_to)
    return RadiusTable(rows)


def effective_threshold(rows, radius: float = RADIUS_THRESHOLD):
    """
    Smallest n in `rows` such that it and every later row have
    r_exact < `radius`; None if the last row does not qualify.
    """
    threshold = None
    for row in sorted(rows, key=lambda r: r.n, reverse=True):
        if row.r_exact < radius:
            threshold = row.n
        else:
            break
    return threshold


def uniform_epsilon(n0: int) -> float:
    """
    min{0.1, eps_2, ..., eps_n0} with eps_n = 1 - r_n: a gap below the unit
    ball valid for all n once r_n < 0.9 holds beyond n0.
    """
    n0 = check_dimension(n0, minimum=2)
    eps = [1.0 - exact_volume(n).effective_radius for n in range(2, n0 + 1)]
    return min([0.1] + eps)
