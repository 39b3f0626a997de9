"""
Gauss-Legendre quadrature in log space.

`adaptive_log_quad` integrates exp(g) for a vector of log-integrands g at
once, keeping every panel value as a logarithm so integrands that are
astronomically large or small (x^1000-type moments) never overflow.
"""
import functools
import heapq
import logging
import math

import numpy as np
from scipy.special import logsumexp, roots_legendre

from .exceptions import InvalidParameterError, QuadratureError, handle_numeric_exception

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 32
DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_PANELS = 10_000
DEFAULT_INITIAL_PANELS = 16


@functools.lru_cache(maxsize=16)
def gauss_legendre(order: int):
    """
    Nodes and weights of the `order`-point rule on [-1, 1], with the
    weights also returned as logs.
    """
    if order < 2:
        raise InvalidParameterError("at least 2 nodes required for Gauss-Legendre")
    nodes, weights = roots_legendre(order)
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    log_weights = np.log(weights)
    log_weights.flags.writeable = False
    return nodes, weights, log_weights


def _log_panel(log_f, x0: float, x1: float, order: int) -> np.ndarray:
    nodes, _, log_weights = gauss_legendre(order)
    half = 0.5 * (x1 - x0)
    x = x0 + half * (nodes + 1.0)
    g = np.atleast_2d(log_f(x))
    return math.log(half) + logsumexp(g + log_weights, axis=1)


def _log_abs_diff(la: np.ndarray, lb: np.ndarray) -> np.ndarray:
    """
    ln |exp(la) - exp(lb)|, -inf where both are -inf.
    """
    hi = np.maximum(la, lb)
    lo = np.minimum(la, lb)
    out = np.full_like(hi, -math.inf)
    live = np.isfinite(hi)
    gap = lo[live] - hi[live]
    with np.errstate(divide="ignore"):
        out[live] = hi[live] + np.log(-np.expm1(gap))
    return out


class _Panel:
    __slots__ = ("x0", "x1", "log_value", "log_error")

    def __init__(self, log_f, x0, x1, order):
        self.x0 = x0
        self.x1 = x1
        mid = 0.5 * (x0 + x1)
        whole = _log_panel(log_f, x0, x1, order)
        split = np.logaddexp(_log_panel(log_f, x0, mid, order), _log_panel(log_f, mid, x1, order))
        self.log_value = split
        self.log_error = _log_abs_diff(whole, split)


class LogQuadResult:
    """
    Output of `adaptive_log_quad`: per-integrand log integrals and their
    estimated relative errors.
    """

    def __init__(self, log_values: np.ndarray, rel_errors: np.ndarray, panels: int):
        self.log_values = log_values
        self.rel_errors = rel_errors
        self.panels = panels

    def __str__(self):
        return str(self.to_dict())

    def to_dict(self):
        return {
            "log_values": [float(x) for x in self.log_values],
            "rel_errors": [float(x) for x in self.rel_errors],
            "panels": self.panels,
        }


@handle_numeric_exception
def adaptive_log_quad(
    log_f,
    a: float,
    b: float,
    order: int = DEFAULT_ORDER,
    rel_tol: float = DEFAULT_REL_TOL,
    max_panels: int = DEFAULT_MAX_PANELS,
    initial_panels: int = DEFAULT_INITIAL_PANELS,
    label: str = "",
) -> LogQuadResult:
    """
    Integrate exp(log_f(x)) over [a, b] by adaptive panel splitting.

    `log_f` maps a 1-D array of abscissae to an array of shape
    (m, len(x)) (or (len(x),) for a single integrand). Each panel is
    evaluated with the `order`-point rule on the whole panel and on its two
    halves; their difference is the panel error. Panels whose error is
    large against the current total are bisected until the summed error
    of every integrand is below `rel_tol` relative, or `max_panels` is
    exceeded (`QuadratureError`).

    params:
        log_f (callable): vectorised log-integrand.
        a, b (float): integration limits, a < b.
        order (int): Gauss-Legendre points per rule.
        rel_tol (float): relative error target per integrand.
        max_panels (int): panel budget.
        initial_panels (int): uniform panels to start from.
        label (str): name used in log messages and errors.
    """
    if not b > a:
        raise InvalidParameterError("integration limits must satisfy a < b")
    if rel_tol <= 0:
        raise InvalidParameterError("rel_tol must be positive")
    edges = np.linspace(a, b, initial_panels + 1)
    panels = [_Panel(log_f, float(edges[i]), float(edges[i + 1]), order) for i in range(initial_panels)]
    log_tol = math.log(rel_tol)

    while True:
        values = np.stack([p.log_value for p in panels])
        errors = np.stack([p.log_error for p in panels])
        total = logsumexp(values, axis=0)
        safe_total = np.where(np.isfinite(total), total, 0.0)
        scores = np.where(np.isfinite(total), errors - safe_total, -math.inf)
        rel = logsumexp(scores, axis=0)
        worst = float(np.max(rel))
        if worst <= log_tol:
            break
        if len(panels) >= max_panels:
            raise QuadratureError(len(panels), math.exp(worst), rel_tol, label)
        # bisect every panel carrying more than its share of the budget,
        # and always at least the worst one
        panel_scores = np.max(scores, axis=1)
        cutoff = log_tol - math.log(len(panels))
        chosen = set(np.flatnonzero(panel_scores > cutoff).tolist())
        chosen.add(int(np.argmax(panel_scores)))
        room = max_panels - len(panels)
        if len(chosen) > room:
            chosen = set(heapq.nlargest(max(room, 1), chosen, key=lambda i: panel_scores[i]))
        refined = []
        for i, p in enumerate(panels):
            if i in chosen:
                mid = 0.5 * (p.x0 + p.x1)
                refined.append(_Panel(log_f, p.x0, mid, order))
                refined.append(_Panel(log_f, mid, p.x1, order))
            else:
                refined.append(p)
        panels = refined

    rel_errors = np.exp(rel)
    logger.debug("%s: converged with %d panels, max rel. error %.2e", label or "quadrature", len(panels), float(np.max(rel_errors)))
    if len(panels) > 0.8 * max_panels:
        logger.warning("%s used %d of %d panels", label or "quadrature", len(panels), max_panels)
    return LogQuadResult(total, rel_errors, len(panels))


def gauss_legendre_triangle(f, order: int = DEFAULT_ORDER) -> np.ndarray:
    """
    Integrate f(a, b) over the triangle {a, b >= 0, a + b <= 1} with a
    collapsed tensor rule: a = u, b = (1 - u) v, Jacobian (1 - u).
    Exact for polynomials of degree < 2 * order - 1.

    `f` receives two 1-D arrays of equal length and returns an array of
    shape (m, len) or (len,).
    """
    nodes, weights, _ = gauss_legendre(order)
    t = 0.5 * (nodes + 1.0)
    w = 0.5 * weights
    u, v = np.meshgrid(t, t, indexing="ij")
    wu, wv = np.meshgrid(w, w, indexing="ij")
    u = u.ravel()
    v = v.ravel()
    jac = (wu * wv).ravel() * (1.0 - u)
    vals = np.atleast_2d(f(u, (1.0 - u) * v))
    return vals @ jac
