"""
Cross-checks behind the `verify` command. Each check returns a
`CheckResult`; `run_all` runs them in a fixed order and never raises for
a failed check.
"""
import logging
import math

import numpy as np

from . import bounds
from .body import SQRT2, BodySpec, contains, contains_definitional, sample_unit_vectors, width
from .datamodel import CheckResult
from .exceptions import ConstWidthError
from .rng import SeededRNG, chunk_sizes
from .specfun import log_binomial, log_unit_ball_volume, log_unit_ball_volumes
from .volume import DEFAULT_CHUNK, exact_volume, mc_volume, mc_volume_radial

logger = logging.getLogger(__name__)

SPECFUN_TOL = 1e-10
BOUNDARY_BAND = 1e-9
WIDTH_TOL = 1e-9
VOLUME_REL_TOL = 0.01
ORACLE_DIMENSIONS = (2, 3, 5, 10, 50)
WIDTH_DIMENSIONS = (2, 3, 10, 100)
VOLUME_DIMENSIONS = tuple(range(2, 9))
CHAIN_DIMENSIONS = (
    2, 3, 4, 5, 6, 8, 10, 13, 16, 20, 25, 32, 40, 50, 64,
    80, 100, 128, 160, 200, 256, 320, 400, 500, 640, 800, 1000,
)


def _chunks(seed: int, samples: int):
    sizes = chunk_sizes(samples, DEFAULT_CHUNK)
    for child, size in zip(SeededRNG(seed).spawn(len(sizes)), sizes):
        yield child.generator, size


def check_specfun() -> CheckResult:
    """
    Omega_2 = pi, Omega_3 = 4 pi / 3, Omega_n = (2 pi / n) Omega_{n-2} up to
    n = 1000, exact binomials against integer arithmetic, and bitwise
    symmetry C(n, k) = C(n, n-k).
    """
    dev = max(
        abs(log_unit_ball_volume(2) - math.log(math.pi)),
        abs(log_unit_ball_volume(3) - math.log(4.0 * math.pi / 3.0)),
    )
    log_Omega = log_unit_ball_volumes(1000)
    n = np.arange(2, 1001)
    dev = max(dev, float(np.max(np.abs(log_Omega[n] - log_Omega[n - 2] - np.log(2.0 * math.pi / n)))))
    for nn, k in ((10, 3), (50, 25), (100, 37), (300, 150)):
        dev = max(dev, abs(log_binomial(nn, k) - math.log(math.comb(nn, k))))
    symmetric = all(
        log_binomial(nn, k) == log_binomial(nn, nn - k) for nn in range(1, 201) for k in range(nn + 1)
    )
    passed = symmetric and dev < SPECFUN_TOL
    return CheckResult(
        "specfun",
        passed,
        dev,
        SPECFUN_TOL,
        "max deviation {:.3e}, binomial symmetry {}".format(dev, "exact" if symmetric else "broken"),
    )


def check_oracle_equivalence(samples: int, seed: int = 0, dimensions=ORACLE_DIMENSIONS) -> CheckResult:
    """
    `contains` against `contains_definitional` on uniform points of
    1.05 sqrt(2) B^n. Disagreements are only tolerated within the 1e-9
    band around the boundary of either test.
    """
    disagreements = 0
    tested = 0
    for n in dimensions:
        spec = BodySpec(n)
        for g, size in _chunks(seed + n, samples):
            radius = 1.05 * SQRT2 * g.random(size) ** (1.0 / n)
            v = sample_unit_vectors(g, size, n) * radius[:, None]
            fast = contains(spec, v)
            slow = contains_definitional(spec, v)
            plus = np.linalg.norm(np.maximum(v, 0.0), axis=1)
            minus = np.linalg.norm(np.maximum(-v, 0.0), axis=1)
            outer = plus * plus + (minus + SQRT2) ** 2 - 4.0
            inner = (plus + 2.0 - SQRT2) ** 2 + minus * minus - 4.0
            band = (np.abs(outer) < BOUNDARY_BAND) | (np.abs(inner) < BOUNDARY_BAND)
            disagreements += int(np.count_nonzero((fast != slow) & ~band))
            tested += size
    return CheckResult(
        "oracle_equivalence",
        disagreements == 0,
        disagreements,
        0,
        "{} disagreements in {} points, n in {}".format(disagreements, tested, list(dimensions)),
    )


def max_width_deviation(n: int, samples: int, seed: int = 0) -> float:
    spec = BodySpec(n)
    worst = 0.0
    for g, size in _chunks(seed, samples):
        theta = sample_unit_vectors(g, size, n)
        worst = max(worst, float(np.max(np.abs(np.asarray(width(spec, theta)) - 2.0))))
    return worst


def check_width_sweep(samples: int, seed: int = 0, dimensions=WIDTH_DIMENSIONS) -> CheckResult:
    worst = max(max_width_deviation(n, samples, seed + n) for n in dimensions)
    return CheckResult(
        "width_sweep",
        worst < WIDTH_TOL,
        worst,
        WIDTH_TOL,
        "max |width - 2| = {:.3e} over {} directions per n in {}".format(worst, samples, list(dimensions)),
    )


def check_triangle_moment_identity(n_max: int = 30) -> CheckResult:
    try:
        report = bounds.verify_triangle_moment_identity(n_max)
    except ConstWidthError as e:
        return CheckResult("triangle_moment_identity", False, getattr(e, "observed", None), bounds.MOMENT_IDENTITY_TOL, str(e))
    return CheckResult(
        "triangle_moment_identity",
        True,
        report.max_deviation,
        bounds.MOMENT_IDENTITY_TOL,
        "max deviation {:.3e} over {} (n, k) pairs, n <= {}".format(report.max_deviation, report.pairs, n_max),
    )


def check_s_routes() -> CheckResult:
    """
    Numeric and algebraic s agree, the constraint is active at the
    witnesses, beta* solves 2 beta^2 + sqrt(2) beta - 4 x*^2 = 0, and
    (alpha*, beta*) is a feasible triangle.
    """
    try:
        opt = bounds.minimize_s()
    except ConstWidthError as e:
        return CheckResult("s_route_agreement", False, getattr(e, "observed", None), bounds.ROUTE_AGREEMENT, str(e))
    gap = abs(opt.s - opt.s_numeric)
    quad = abs(2.0 * opt.beta_star ** 2 + SQRT2 * opt.beta_star - 4.0 * opt.x_star ** 2)
    feasible = bounds.triangle_feasible(opt.alpha_star, opt.beta_star).feasible
    worst = max(gap, opt.constraint_residual, quad)
    return CheckResult(
        "s_route_agreement",
        feasible and worst < bounds.ROUTE_AGREEMENT,
        worst,
        bounds.ROUTE_AGREEMENT,
        "s = {:.12g}, |s - s_numeric| = {:.3e}, constraint residual {:.3e}".format(opt.s, gap, opt.constraint_residual),
    )


def volumes_agree(reference, estimate) -> bool:
    """
    Two volume results agree when they are within max(3 half-widths of the
    wider CI, 1% of `reference`). Quadrature has a zero-width CI, so against
    it only the estimate's interval counts.
    """
    wider = max(reference.ci_half_width(), estimate.ci_half_width())
    allowed = max(3.0 * wider, VOLUME_REL_TOL * reference.volume)
    return abs(estimate.volume - reference.volume) <= allowed


def estimator_seeds(seed: int, n: int) -> tuple:
    """
    Independent seeds for the rejection and radial estimators in dimension
    n, derived from (seed, n) through a SeedSequence.
    """
    children = np.random.SeedSequence([seed, n]).spawn(2)
    return tuple(int(c.generate_state(1)[0]) for c in children)


def check_volume_agreement(samples: int, seed: int = 0, dimensions=VOLUME_DIMENSIONS) -> CheckResult:
    """
    Quadrature, rejection MC and radial MC agree pairwise in every
    dimension of `dimensions`.
    """
    failures = []
    worst = 0.0
    for n in dimensions:
        exact = exact_volume(n)
        rejection_seed, radial_seed = estimator_seeds(seed, n)
        try:
            rejection = mc_volume(n, samples, rejection_seed)
            radial = mc_volume_radial(n, samples, radial_seed)
        except ConstWidthError as e:
            failures.append("n={}: {}".format(n, e))
            continue
        pairs = (
            ("quadrature/mc_rejection", exact, rejection),
            ("quadrature/mc_radial", exact, radial),
            ("mc_rejection/mc_radial", rejection, radial),
        )
        for label, a, b in pairs:
            worst = max(worst, abs(b.volume / a.volume - 1.0))
            if not volumes_agree(a, b):
                failures.append("n={} {}".format(n, label))
    detail = "max relative gap {:.3e}, n in {}".format(worst, list(dimensions))
    if failures:
        detail += "; disagree: " + ", ".join(failures)
    return CheckResult("volume_agreement", not failures, worst, VOLUME_REL_TOL, detail)


def check_bound_chain(dimensions=CHAIN_DIMENSIONS) -> CheckResult:
    """
    Schramm lower bound <= r_n <= (1/2)(n+1)^(1/n) s + 1e-12 on a spread of
    dimensions up to 1000.
    """
    broken = []
    for n in dimensions:
        r = exact_volume(n).effective_radius
        lower = bounds.schramm_lower_bound(n)
        upper = bounds.best_triangle_upper_bound(n)
        if not lower <= r <= upper + 1e-12:
            broken.append(n)
    detail = "{} dimensions in [{}, {}]".format(len(dimensions), min(dimensions), max(dimensions))
    if broken:
        detail += "; violated at n = {}".format(broken)
    return CheckResult("bound_chain", not broken, len(broken), 0, detail)


def run_all(samples: int = 10 ** 6, seed: int = 0) -> list:
    """
    All checks in order. Samples count per dimension for the sampling
    checks.
    """
    checks = [
        check_specfun,
        lambda: check_oracle_equivalence(samples, seed),
        lambda: check_width_sweep(samples, seed),
        check_triangle_moment_identity,
        check_s_routes,
        lambda: check_volume_agreement(samples, seed),
        check_bound_chain,
    ]
    results = []
    for check in checks:
        result = check()
        logger.info(result.line())
        results.append(result)
    return results
