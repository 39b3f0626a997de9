"""
The body M of constant width 2 in R^n: the intersection of the radius-2
balls centred on L = sqrt(2) S  union  (sqrt(2) - 2) S, where S is the part
of the unit sphere in the positive orthant.

A point v belongs to M exactly when (|v_+|, |v_-|) lies in the disk segment
A = {a, b >= 0 : a^2 + (b + sqrt(2))^2 <= 4}. All functions accept a single
n-vector or a batch of shape (m, n) and then return arrays of length m.
"""
import logging
import math

import numpy as np

from .datamodel import PositiveDecomposition
from .exceptions import (
    DimensionMismatchError,
    InvalidParameterError,
    NotUnitVectorError,
)
from .specfun import check_dimension

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
TWO_MINUS_SQRT2 = 2.0 - SQRT2
DEFAULT_TOL = 1e-12
UNIT_TOL = 1e-9


class BodySpec:
    """
    Immutable description of M in dimension n. The outer cap of L has
    radius sqrt(2); the reflected cap is scaled by sqrt(2) - 2.
    """

    __slots__ = ("_n",)

    r_outer = SQRT2
    r_inner_signed = SQRT2 - 2.0
    width = 2.0

    def __init__(self, n: int):
        object.__setattr__(self, "_n", check_dimension(n))

    def __setattr__(self, name, value):
        raise AttributeError("BodySpec is immutable")

    @property
    def n(self) -> int:
        return self._n

    def __eq__(self, other):
        return isinstance(other, BodySpec) and other.n == self.n

    def __hash__(self):
        return hash(("BodySpec", self._n))

    def __repr__(self):
        return "BodySpec(n={})".format(self._n)

    def to_dict(self):
        return {
            "n": self._n,
            "r_outer": self.r_outer,
            "r_inner_signed": self.r_inner_signed,
        }


class DiskSegment:
    """
    The planar region A with corners (sqrt(2), 0) and (0, 2 - sqrt(2)),
    cut from the radius-2 disk centred at (0, -sqrt(2)).
    """

    __slots__ = ()

    center_b = -SQRT2
    radius = 2.0
    corner_a = SQRT2
    corner_b = TWO_MINUS_SQRT2

    def contains(self, a, b, tol: float = DEFAULT_TOL):
        return disk_segment_contains(a, b, tol)

    def upper_b(self, a):
        """
        Upper boundary b(a) = sqrt(4 - a^2) - sqrt(2) on [0, sqrt(2)].
        """
        a = np.clip(np.asarray(a, dtype=float), 0.0, SQRT2)
        return np.maximum(np.sqrt(4.0 - a * a) - SQRT2, 0.0)

    def area(self) -> float:
        # integral of sqrt(4 - t^2) over [sqrt(2), 2]
        return math.pi / 2.0 - 1.0

    def to_dict(self):
        return {
            "center_b": self.center_b,
            "radius": self.radius,
            "corner_a": self.corner_a,
            "corner_b": self.corner_b,
        }


def disk_segment() -> DiskSegment:
    return DiskSegment()


def _as_points(spec: BodySpec, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim == 0 or v.ndim > 2:
        raise InvalidParameterError("expected an n-vector or an (m, n) batch")
    if v.shape[-1] != spec.n:
        raise DimensionMismatchError(spec.n, v.shape[-1])
    if not np.all(np.isfinite(v)):
        raise InvalidParameterError("coordinates must be finite")
    return v


def _as_directions(spec: BodySpec, theta) -> np.ndarray:
    theta = _as_points(spec, theta)
    norms = np.linalg.norm(theta, axis=-1)
    bad = np.abs(norms - 1.0) > UNIT_TOL
    if np.any(bad):
        raise NotUnitVectorError(float(np.atleast_1d(norms)[np.atleast_1d(bad)][0]), UNIT_TOL)
    return theta


def _split_norms(v: np.ndarray):
    plus = np.linalg.norm(np.maximum(v, 0.0), axis=-1)
    minus = np.linalg.norm(np.maximum(-v, 0.0), axis=-1)
    return plus, minus


def _scalar_or_array(x):
    return x.item() if np.ndim(x) == 0 else x


def positive_decomposition(v) -> PositiveDecomposition:
    """
    Split a single vector into v_plus = max(v, 0) and v_minus = max(-v, 0).
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise InvalidParameterError("positive_decomposition takes a single vector")
    if not np.all(np.isfinite(v)):
        raise InvalidParameterError("coordinates must be finite")
    v_plus = np.where(v > 0.0, v, 0.0)
    v_minus = np.where(v < 0.0, -v, 0.0)
    return PositiveDecomposition(
        v_plus, v_minus, np.linalg.norm(v_plus), np.linalg.norm(v_minus)
    )


def disk_segment_contains(a, b, tol: float = DEFAULT_TOL):
    if tol < 0:
        raise InvalidParameterError("tol must be nonnegative")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    inside = (a >= -tol) & (b >= -tol) & (a * a + (b + SQRT2) ** 2 <= 4.0 + tol)
    return _scalar_or_array(inside)


def contains(spec: BodySpec, v, tol: float = DEFAULT_TOL):
    """
    Membership test through the disk segment: v in M iff
    (|v_+|, |v_-|) in A.

    The condition is necessary because the farthest centre of L from v is
    sqrt(2) * v_-/|v_-|, and sufficient because the set
    {p - q : p, q >= 0, (|p|, |q|) in A} has diameter 2 and contains L,
    hence lies in every ball of radius 2 centred on L.
    """
    v = _as_points(spec, v)
    plus, minus = _split_norms(v)
    return disk_segment_contains(plus, minus, tol)


def contains_definitional(spec: BodySpec, v, tol: float = DEFAULT_TOL):
    """
    Membership straight from the intersection of balls: the squared
    distance to the farthest centre on each cap of L must be <= 4.
    Farthest distances are taken in closed form so v_- = 0 or v_+ = 0
    need no special casing.
    """
    if tol < 0:
        raise InvalidParameterError("tol must be nonnegative")
    v = _as_points(spec, v)
    plus, minus = _split_norms(v)
    outer = plus * plus + (minus + SQRT2) ** 2
    inner = (plus + TWO_MINUS_SQRT2) ** 2 + minus * minus
    return _scalar_or_array((outer <= 4.0 + tol) & (inner <= 4.0 + tol))


def support(spec: BodySpec, theta):
    """
    Support function h(theta) = max over (a, b) in A of a|theta_+| + b|theta_-|.

    The maximum of a linear form over the arc sits at (2p, 2q - sqrt(2)) when
    that point has b >= 0, i.e. q >= p; otherwise it is the corner (sqrt(2), 0).
    """
    theta = _as_directions(spec, theta)
    p, q = _split_norms(theta)
    h = np.where(p >= q, SQRT2 * p, 2.0 - SQRT2 * q)
    return _scalar_or_array(h)


def width(spec: BodySpec, theta):
    theta = _as_directions(spec, theta)
    return _scalar_or_array(np.asarray(support(spec, theta)) + np.asarray(support(spec, -theta)))


def radial_extent(spec: BodySpec, u):
    """
    Largest t with t*u in M: the positive root of
    t^2 + 2 sqrt(2) |u_-| t - 2 = 0.
    """
    u = _as_directions(spec, u)
    _, q = _split_norms(u)
    return _scalar_or_array(np.sqrt(2.0 * q * q + 2.0) - SQRT2 * q)


def sample_boundary_point(spec: BodySpec, a: float, b: float, u, w):
    """
    The point a*u - b*w of M for (a, b) in A and unit directions u, w in
    the positive orthant. It lies on the boundary when (a, b) lies on the
    arc of A and u, w have disjoint supports.
    """
    if not disk_segment_contains(a, b, DEFAULT_TOL):
        raise InvalidParameterError("({!r}, {!r}) is not in the disk segment A".format(a, b))
    u = _as_directions(spec, u)
    w = _as_directions(spec, w)
    if u.ndim != 1 or w.ndim != 1:
        raise InvalidParameterError("u and w must be single vectors")
    if np.any(u < 0.0) or np.any(w < 0.0):
        raise InvalidParameterError("u and w must have nonnegative entries")
    return a * u - b * w


def width_witnesses(spec: BodySpec, theta):
    """
    Two members of M whose difference is 2*theta. For |theta_-| >= |theta_+|
    they are 2 theta_+ - (2|theta_-| - sqrt(2)) theta_-/|theta_-| and
    sqrt(2) theta_-/|theta_-|; otherwise the roles of theta and -theta swap.
    """
    theta = _as_directions(spec, theta)
    if theta.ndim != 1:
        raise InvalidParameterError("width_witnesses takes a single direction")
    flip = np.linalg.norm(np.maximum(theta, 0.0)) > np.linalg.norm(np.maximum(-theta, 0.0))
    t = -theta if flip else theta
    t_plus = np.maximum(t, 0.0)
    t_minus = np.maximum(-t, 0.0)
    q = np.linalg.norm(t_minus)
    hat = t_minus / q
    first = 2.0 * t_plus - (2.0 * q - SQRT2) * hat
    second = SQRT2 * hat
    if flip:
        return second, first
    return first, second


def sample_unit_vectors(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """
    `count` uniform directions on the unit sphere of R^n (normalised
    Gaussians).
    """
    g = rng.standard_normal((count, n))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    # a zero Gaussian vector has probability 0; redraw to be safe
    while np.any(norms == 0.0):
        idx = np.flatnonzero(norms[:, 0] == 0.0)
        g[idx] = rng.standard_normal((idx.size, n))
        norms = np.linalg.norm(g, axis=1, keepdims=True)
    return g / norms


def sample_disk_segment(rng: np.random.Generator, count: int) -> np.ndarray:
    """
    `count` points uniform on A, by rejection from [0, sqrt(2)] x [0, 2 - sqrt(2)].
    """
    out = np.empty((0, 2))
    while out.shape[0] < count:
        need = count - out.shape[0]
        ab = rng.random((2 * need + 16, 2)) * np.array([SQRT2, TWO_MINUS_SQRT2])
        keep = ab[:, 0] ** 2 + (ab[:, 1] + SQRT2) ** 2 <= 4.0
        out = np.vstack([out, ab[keep][:need]])
    return out


def sample_arc(rng: np.random.Generator, count: int) -> np.ndarray:
    """
    `count` points on the curved edge of A, (2 sin phi, 2 cos phi - sqrt(2))
    for phi uniform in [0, pi/4].
    """
    phi = rng.random(count) * (math.pi / 4.0)
    return np.column_stack([2.0 * np.sin(phi), np.maximum(2.0 * np.cos(phi) - SQRT2, 0.0)])


def sample_members(spec: BodySpec, count: int, rng: np.random.Generator, boundary: bool = False) -> np.ndarray:
    """
    `count` points a*u - b*w of M with u, w uniform directions in the
    positive orthant. By default (a, b) is uniform on A. With
    `boundary=True`, (a, b) is taken on the arc of A and u, w get disjoint
    random supports, which puts every point on the boundary of M.
    """
    n = spec.n
    if not boundary:
        ab = sample_disk_segment(rng, count)
        u = np.abs(sample_unit_vectors(rng, count, n))
        w = np.abs(sample_unit_vectors(rng, count, n))
    else:
        if n < 2:
            raise InvalidParameterError("boundary sampling needs n >= 2")
        ab = sample_arc(rng, count)
        mask = rng.random((count, n)) < 0.5
        rows = np.arange(count)
        first = rng.integers(0, n, count)
        second = (first + rng.integers(1, n, count)) % n
        mask[rows, first] = True
        mask[rows, second] = False
        u = np.abs(rng.standard_normal((count, n))) * mask
        w = np.abs(rng.standard_normal((count, n))) * ~mask
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        w /= np.linalg.norm(w, axis=1, keepdims=True)
    logger.debug("sampled %d members of M in R^%d (boundary=%s)", count, n, boundary)
    return ab[:, :1] * u - ab[:, 1:] * w
