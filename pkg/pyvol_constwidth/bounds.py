"""
The analytic bound chain: triangles T_{alpha,beta} containing the disk
segment A, the minimum s of sqrt(alpha^2 + beta^2) over them, and the
sextic P(x) = 8x^6 - 76x^4 + 54x^2 + 1 whose least positive root is s/2.
"""
import functools
import logging
import math

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import bisect, minimize_scalar, newton

from .body import SQRT2, TWO_MINUS_SQRT2
from .datamodel import MomentIdentityReport, SOptimum, TriangleBound
from .exceptions import (
    InfeasibleTriangleError,
    InvalidParameterError,
    VerificationError,
)
from .quadrature import DEFAULT_ORDER, gauss_legendre_triangle
from .specfun import check_dimension, log_beta, log_binomial, log_unit_ball_volumes, logsumexp

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-12
ROUTE_AGREEMENT = 1e-9
ROOT_RESIDUAL = 1e-12
MOMENT_IDENTITY_TOL = 1e-9
HAND_ALPHA = 1.5
HAND_BETA = 0.7 * SQRT2


def schramm_lower_bound(n: int) -> float:
    """
    sqrt(3 + 2/(n+1)) - 1, a lower bound on the effective radius of any
    body of constant width 2 in R^n.
    """
    n = check_dimension(n)
    return math.sqrt(3.0 + 2.0 / (n + 1)) - 1.0


def triangle_feasible(alpha: float, beta: float) -> TriangleBound:
    """
    Whether T_{alpha,beta} contains A: the line a/alpha + b/beta = 1 must
    stay at distance >= 2 from (0, -sqrt(2)), i.e.
    alpha (beta + sqrt(2)) >= 2 sqrt(alpha^2 + beta^2).
    """
    if not (alpha > 0 and beta > 0) or not (math.isfinite(alpha) and math.isfinite(beta)):
        raise InvalidParameterError("alpha and beta must be positive and finite")
    s = math.hypot(alpha, beta)
    lhs = alpha * (beta + SQRT2)
    rhs = 2.0 * s
    return TriangleBound(alpha, beta, s, lhs >= rhs - FEASIBILITY_TOL, lhs, rhs)


def _require_feasible(alpha: float, beta: float) -> TriangleBound:
    tri = triangle_feasible(alpha, beta)
    if not tri.feasible:
        raise InfeasibleTriangleError(alpha, beta)
    return tri


def triangle_upper_bound(n: int, alpha: float, beta: float) -> float:
    """
    r_n <= (1/2) (n+1)^(1/n) sqrt(alpha^2 + beta^2) for a feasible triangle.
    """
    n = check_dimension(n)
    tri = _require_feasible(alpha, beta)
    return 0.5 * math.exp(math.log(n + 1) / n) * tri.s_candidate


def product_ball_log_term(n: int, k: int, alpha: float, beta: float) -> float:
    """
    ln( alpha^k Omega_k * beta^(n-k) Omega_{n-k} / Omega_n ), the volume
    ratio of alpha B^k x beta B^(n-k) to B^n.
    """
    n = check_dimension(n)
    if not 0 <= k <= n:
        raise InvalidParameterError("k={!r} outside [0, {}]".format(k, n))
    log_Omega = log_unit_ball_volumes(n)
    return k * math.log(alpha) + log_Omega[k] + (n - k) * math.log(beta) + log_Omega[n - k] - log_Omega[n]


def orthant_sum_log_bound(n: int, alpha: float, beta: float) -> float:
    """
    ln of Omega_n / 2^n * sum_k alpha^k Omega_k beta^(n-k) Omega_{n-k} / Omega_n,
    an upper bound on ln Vol(M) for a feasible triangle.
    """
    n = check_dimension(n)
    _require_feasible(alpha, beta)
    log_Omega = log_unit_ball_volumes(n)
    k = np.arange(n + 1)
    terms = k * math.log(alpha) + log_Omega[k] + (n - k) * math.log(beta) + log_Omega[n - k]
    return logsumexp(terms) - n * math.log(2.0)


def hand_check() -> TriangleBound:
    """
    The hand-verifiable pair alpha = 1.5, beta = 0.7 sqrt(2):
    alpha^2 + beta^2 = 3.23 < 3.24 = 1.8^2 and
    alpha (beta + sqrt(2)) > 1.5 * 1.7 * sqrt(2) > 3.6 >= 2 sqrt(3.23).
    """
    tri = triangle_feasible(HAND_ALPHA, HAND_BETA)
    chain = [tri.lhs, 1.5 * 1.7 * SQRT2, 3.6, tri.rhs]
    if not (tri.feasible and tri.s_candidate ** 2 < 3.24 and chain[0] >= chain[1] - FEASIBILITY_TOL and chain[1] > chain[2] >= chain[3]):
        raise VerificationError("hand check", tri.s_candidate ** 2, 3.24, {"chain": chain})
    return tri


def polynomial_P() -> Polynomial:
    return Polynomial([1.0, 0.0, 54.0, 0.0, -76.0, 0.0, 8.0])


def descartes_sign_changes(poly: Polynomial = None) -> int:
    """
    Sign changes of the coefficient sequence of P in y = x^2, highest
    degree first: (8, -76, 54, 1) has two.
    """
    coef = (poly if poly is not None else polynomial_P()).coef[::2][::-1]
    signs = [c > 0 for c in coef if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def squared_rhs_positive(points: int = 10_000) -> bool:
    """
    1/8 + 11x^2 - 4x^4 > 0 on a grid of (0, 1); this is what allows both
    sides of the reduction to be squared.
    """
    x = np.linspace(0.0, 1.0, points + 2)[1:-1]
    return bool(np.all(0.125 + 11.0 * x ** 2 - 4.0 * x ** 4 > 0.0))


@functools.lru_cache(maxsize=1)
def least_positive_root_P() -> float:
    """
    The unique root of P in (0, 1): bisection from P(0) = 1, P(1) = -13 to
    width 1e-12, then at most five Newton steps.
    """
    P = polynomial_P()
    dP = P.deriv()
    changes = descartes_sign_changes(P)
    if changes != 2:
        raise VerificationError("descartes sign changes", changes, 2)
    if not (P(0.0) > 0.0 > P(1.0)):
        raise VerificationError("sign change on (0, 1)", float(P(1.0)), 0.0)
    x = bisect(P, 0.0, 1.0, xtol=1e-12)
    x = float(newton(P, x, fprime=dP, tol=1e-16, maxiter=5, disp=False))
    residual = abs(float(P(x)))
    if residual >= ROOT_RESIDUAL:
        raise VerificationError("root residual", residual, ROOT_RESIDUAL)
    logger.debug("least positive root of P: %.17g (|P| = %.2e)", x, residual)
    return x


def critical_beta(x: float) -> float:
    """
    Positive root of 2 beta^2 + sqrt(2) beta - 4 x^2 = 0.
    """
    if x < 0:
        raise InvalidParameterError("x must be nonnegative")
    return -1.0 / (2.0 * SQRT2) + math.sqrt(0.125 + 2.0 * x * x)


def alpha_on_constraint(beta: float) -> float:
    """
    alpha with alpha (beta + sqrt(2)) = 2 sqrt(alpha^2 + beta^2), i.e.
    alpha = 2 beta / sqrt((beta + sqrt(2))^2 - 4); needs beta > 2 - sqrt(2).
    """
    gap = (beta + SQRT2) ** 2 - 4.0
    if not gap > 0:
        raise InvalidParameterError("beta must exceed 2 - sqrt(2)")
    return 2.0 * beta / math.sqrt(gap)


def _s_on_constraint(beta: float) -> float:
    return math.hypot(alpha_on_constraint(beta), beta)


@functools.lru_cache(maxsize=1)
def minimize_s() -> SOptimum:
    """
    s = min sqrt(alpha^2 + beta^2) over triangles containing A, two ways:
    golden-section search along the active constraint, and 2 x* with x*
    the least positive root of P. The two must agree to 1e-9. Witnesses
    come from the algebraic route: beta* = critical_beta(x*),
    alpha* = sqrt(4 x*^2 - beta*^2).
    """
    res = minimize_scalar(
        _s_on_constraint,
        bracket=(TWO_MINUS_SQRT2 + 1e-3, 1.0, 2.0),
        method="golden",
    )
    s_numeric = float(res.fun)
    x_star = least_positive_root_P()
    s = 2.0 * x_star
    if abs(s - s_numeric) >= ROUTE_AGREEMENT:
        raise VerificationError(
            "s route agreement",
            abs(s - s_numeric),
            ROUTE_AGREEMENT,
            {"s_numeric": s_numeric, "s_algebraic": s, "beta_numeric": float(res.x)},
        )
    beta_star = critical_beta(x_star)
    alpha_star = math.sqrt(4.0 * x_star * x_star - beta_star * beta_star)
    residual = abs(float(polynomial_P()(x_star)))
    logger.debug("s = %.15g (numeric %.15g), beta* = %.12g", s, s_numeric, beta_star)
    return SOptimum(s, alpha_star, beta_star, x_star, residual, s_numeric)


def best_triangle_upper_bound(n: int) -> float:
    """
    (1/2) (n+1)^(1/n) s, the best bound of the triangle family.
    """
    n = check_dimension(n)
    return 0.5 * math.exp(math.log(n + 1) / n) * minimize_s().s


def verify_triangle_moment_identity(n_max: int) -> MomentIdentityReport:
    """
    Check k (n-k) * I(k, n) * C(n, k) = 1 for 2 <= n <= n_max, 1 <= k <= n-1,
    where I(k, n) is the integral of a^(k-1) b^(n-k-1) over the triangle
    {a, b >= 0, a + b <= 1}. I is computed in closed form,
    B(k, n-k+1) / (n-k), and by a collapsed Gauss-Legendre rule that is
    exact for these polynomial integrands.
    """
    n_max = check_dimension(n_max, minimum=2)
    order = max(DEFAULT_ORDER, n_max // 2 + 2)
    dev_closed = 0.0
    dev_quad = 0.0
    gap = 0.0
    pairs = 0
    for n in range(2, n_max + 1):
        ks = np.arange(1, n)

        def integrand(a, b, ks=ks, n=n):
            return a[None, :] ** (ks[:, None] - 1) * b[None, :] ** (n - ks[:, None] - 1)

        quad = gauss_legendre_triangle(integrand, order)
        for k, q in zip(ks.tolist(), quad):
            log_closed = log_beta(k, n - k + 1) - math.log(n - k)
            log_scale = math.log(k) + math.log(n - k) + log_binomial(n, k)
            dev_closed = max(dev_closed, abs(math.expm1(log_scale + log_closed)))
            dev_quad = max(dev_quad, abs(math.expm1(log_scale + math.log(q))))
            gap = max(gap, abs(math.expm1(math.log(q) - log_closed)))
            pairs += 1
    report = MomentIdentityReport(n_max, pairs, dev_closed, dev_quad, gap)
    if report.max_deviation > MOMENT_IDENTITY_TOL:
        raise VerificationError("triangle moment identity", report.max_deviation, MOMENT_IDENTITY_TOL, report.to_dict())
    return report
