import math


def _opt(x):
    return None if x is None else float(x)


class PositiveDecomposition:
    """
    The split v = v_plus - v_minus into coordinate-wise positive and
    negative parts, with their Euclidean norms.
    """

    def __init__(self, v_plus, v_minus, norm_plus: float, norm_minus: float):
        self.v_plus = v_plus
        self.v_minus = v_minus
        self.norm_plus = float(norm_plus)
        self.norm_minus = float(norm_minus)

    def __str__(self):
        return str(self.to_dict())

    def to_dict(self):
        return {
            "v_plus": [float(x) for x in self.v_plus],
            "v_minus": [float(x) for x in self.v_minus],
            "norm_plus": self.norm_plus,
            "norm_minus": self.norm_minus,
        }


class MomentIntegral:
    """
    ln of the integral of a^(k-1) b^(n-k-1) over the disk segment A.
    `est_abs_error` is the quadrature error estimate on `log_value`.
    """

    def __init__(self, k: int, n: int, log_value: float, est_abs_error: float, panels: int = None):
        self.k = int(k)
        self.n = int(n)
        self.log_value = float(log_value)
        self.est_abs_error = float(est_abs_error)
        self.panels = panels

    @property
    def value(self) -> float:
        return math.exp(self.log_value)

    def __str__(self):
        return str(self.to_dict())

    def to_dict(self):
        return {
            "k": self.k,
            "n": self.n,
            "log_value": self.log_value,
            "est_abs_error": self.est_abs_error,
            "panels": self.panels,
        }


class VolumeResult:
    """
    Volume of M in dimension n, kept in log space, with the effective
    radius r_n = (Vol(M) / Omega_n)^(1/n). Monte Carlo methods also carry
    a 95% confidence interval on the volume (as logs), the sample count
    and the seed.
    """

    METHODS = ("quadrature", "mc_rejection", "mc_radial")

    def __init__(
        self,
        n: int,
        log_volume: float,
        effective_radius: float,
        method: str,
        log_ci_low: float = None,
        log_ci_high: float = None,
        samples: int = None,
        seed: int = None,
        est_abs_error: float = None,
    ):
        if method not in self.METHODS:
            raise ValueError("`method` must be one of {}".format(list(self.METHODS)))
        self.n = int(n)
        self.log_volume = float(log_volume)
        self.effective_radius = float(effective_radius)
        self.method = method
        self.log_ci_low = _opt(log_ci_low)
        self.log_ci_high = _opt(log_ci_high)
        self.samples = samples
        self.seed = seed
        self.est_abs_error = _opt(est_abs_error)

    @property
    def volume(self) -> float:
        """
        exp(log_volume); overflows to inf for very large n, use
        `log_volume` there.
        """
        try:
            return math.exp(self.log_volume)
        except OverflowError:
            return math.inf

    @property
    def ci_low(self):
        return None if self.log_ci_low is None else math.exp(self.log_ci_low)

    @property
    def ci_high(self):
        return None if self.log_ci_high is None else math.exp(self.log_ci_high)

    def ci_half_width(self) -> float:
        """
        Half width of the CI on the linear volume scale, 0 for quadrature.
        """
        if self.log_ci_low is None:
            return 0.0
        return 0.5 * (self.ci_high - self.ci_low)

    def __str__(self):
        return str(self.to_dict())

    def to_dict(self):
        return {
            "n": self.n,
            "method": self.method,
            "volume": self.volume,
            "log_volume": self.log_volume,
            "effective_radius": self.effective_radius,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "log_ci_low": self.log_ci_low,
            "log_ci_high": self.log_ci_high,
            "samples": self.samples,
            "seed": self.seed,
        }


class RadiusRow:
    """
    One row of the radius table: the effective radius of M next to the
    lower bound for all constant width bodies and the orthant/triangle
    upper bound.
    """

    def __init__(self, n: int, r_exact: float, r_lower_schramm: float, r_upper_triangle: float, log_volume: float = None):
        self.n = int(n)
        self.r_exact = float(r_exact)
        self.r_lower_schramm = float(r_lower_schramm)
        self.r_upper_triangle = float(r_upper_triangle)
        self.log_volume = _opt(log_volume)

    def is_ordered(self, slack: float = 1e-12) -> bool:
        return self.r_lower_schramm <= self.r_exact <= self.r_upper_triangle + slack

    def __str__(self):
        return str(self.to_dict())

    def to_dict(self):
        return {
            "n": self.n,
            "r_exact": self.r_exact,
            "r_schramm_lower": self.r_lower_schramm,
            "r_eq4_upper": self.r_upper_triangle,
        }


class OrthantTerm:
    """
    Contribution of the (k, n-k) orthants to Vol(M): `count` orthants of
    this type, each holding a piece of log volume `log_piece`.
    """

    def __init__(self, k: int, n: int, log_count: float, log_piece: float):
        self.k = int(k)
        self.n = int(n)
        self.log_count = float(log_count)
        self.log_piece = float(log_piece)

    @property
    def log_total(self) -> float:
        return self.log_count + self.log_piece

    def __str__(self):
        return str(self.to_dict())

    def to_dict(self):
        return {
            "k": self.k,
            "n": self.n,
            "log_count": self.log_count,
            "log_piece": self.log_piece,
            "log_total": self.log_total,
        }


class TriangleBound:
    """
    Triangle T_{alpha,beta} = {a, b >= 0 : a/alpha + b/beta <= 1} and
    whether it contains the disk segment A.
    """

    def __init__(self, alpha: float, beta: float, s_candidate: float, feasible: bool, lhs: float = None, rhs: float = None):
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.s_candidate = float(s_candidate)
        self.feasible = bool(feasible)
        self.lhs = _opt(lhs)
        self.rhs = _opt(rhs)

    def __str__(self):
        return str(self.to_dict())

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "s_candidate": self.s_candidate,
            "s_candidate_squared": self.s_candidate ** 2,
            "feasible": self.feasible,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


class SOptimum:
    """
    The minimum s of sqrt(alpha^2 + beta^2) over triangles containing A,
    its witnesses, and x_star = s/2 as root of the sextic P.
    """

    def __init__(self, s: float, alpha_star: float, beta_star: float, x_star: float, residual: float, s_numeric: float = None):
        self.s = float(s)
        self.alpha_star = float(alpha_star)
        self.beta_star = float(beta_star)
        self.x_star = float(x_star)
        self.residual = float(residual)
        self.s_numeric = _opt(s_numeric)

    @property
    def constraint_residual(self) -> float:
        return abs(self.alpha_star * (self.beta_star + math.sqrt(2.0)) - 2.0 * self.s)

    def __str__(self):
        return str(self.to_dict())

    def to_dict(self):
        return {
            "s": self.s,
            "s_numeric": self.s_numeric,
            "alpha_star": self.alpha_star,
            "beta_star": self.beta_star,
            "x_star": self.x_star,
            "residual": self.residual,
            "constraint_residual": self.constraint_residual,
            "s_less_than_1.8": self.s < 1.8,
        }


class MomentIdentityReport:
    """
    Result of checking k(n-k) * I_{T11}(k, n) * C(n, k) = 1 over a range
    of n, by closed form and by quadrature.
    """

    def __init__(self, n_max: int, pairs: int, max_dev_closed_form: float, max_dev_quadrature: float, max_route_gap: float):
        self.n_max = int(n_max)
        self.pairs = int(pairs)
        self.max_dev_closed_form = float(max_dev_closed_form)
        self.max_dev_quadrature = float(max_dev_quadrature)
        self.max_route_gap = float(max_route_gap)

    @property
    def max_deviation(self) -> float:
        return max(self.max_dev_closed_form, self.max_dev_quadrature)

    def __str__(self):
        return str(self.to_dict())

    def to_dict(self):
        return {
            "n_max": self.n_max,
            "pairs": self.pairs,
            "max_dev_closed_form": self.max_dev_closed_form,
            "max_dev_quadrature": self.max_dev_quadrature,
            "max_route_gap": self.max_route_gap,
        }


class CheckResult:
    """
    Outcome of one verification check.
    """

    def __init__(self, name: str, passed: bool, value: float = None, limit: float = None, detail: str = None):
        self.name = str(name)
        self.passed = bool(passed)
        self.value = _opt(value)
        self.limit = _opt(limit)
        self.detail = str(detail) if detail else None

    def line(self) -> str:
        return "{} {}{}".format(
            "PASS" if self.passed else "FAIL",
            self.name,
            ": " + self.detail if self.detail else "",
        )

    def __str__(self):
        return str(self.to_dict())

    def to_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "limit": self.limit,
            "detail": self.detail,
        }
