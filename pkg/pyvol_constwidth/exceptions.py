import functools

import numpy as np


class ConstWidthError(Exception):
    """
    Root of every error raised by this package.
    """


class InvalidDimensionError(ConstWidthError, ValueError):
    def __init__(self, n, minimum: int = 1):
        self.n = n
        self.minimum = minimum
        super().__init__(n, minimum)

    def __str__(self):
        return "invalid dimension {!r}: expected an integer >= {}".format(
            self.n, self.minimum
        )


class DimensionMismatchError(ConstWidthError, ValueError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(expected, got)

    def __str__(self):
        return "vector has {} coordinates, body lives in R^{}".format(
            self.got, self.expected
        )


class NotUnitVectorError(ConstWidthError, ValueError):
    def __init__(self, norm: float, threshold: float):
        self.norm = norm
        self.threshold = threshold
        super().__init__(norm, threshold)

    def __str__(self):
        return "direction has norm {!r}; | |theta| - 1 | must be <= {}".format(
            self.norm, self.threshold
        )


class InvalidParameterError(ConstWidthError, ValueError):
    pass


class InfeasibleTriangleError(ConstWidthError, ValueError):
    """
    Raised when a bound is requested for a triangle T_{alpha,beta}
    that does not contain the disk segment A.
    """

    def __init__(self, alpha: float, beta: float):
        self.alpha = alpha
        self.beta = beta
        super().__init__(alpha, beta)

    def __str__(self):
        return "triangle with intercepts ({!r}, {!r}) does not contain A".format(
            self.alpha, self.beta
        )


class DegenerateSampleError(ConstWidthError):
    pass


class NumericalError(ConstWidthError, ArithmeticError):
    pass


class QuadratureError(NumericalError):
    """
    Adaptive quadrature ran out of panels before reaching its tolerance.
    `dump()` returns the panel diagnostics for review.
    """

    def __init__(self, panels: int, rel_error: float, tol: float, label: str = ""):
        self.panels = panels
        self.rel_error = rel_error
        self.tol = tol
        self.label = label
        super().__init__(panels, rel_error, tol, label)

    def __str__(self):
        return "quadrature{} did not converge: {} panels, rel. error {:.3e} > {:.1e}".format(
            " for " + self.label if self.label else "",
            self.panels,
            self.rel_error,
            self.tol,
        )

    def dump(self) -> str:
        return "\n".join(
            [
                "label: {}".format(self.label or "-"),
                "panels: {}".format(self.panels),
                "estimated relative error: {!r}".format(self.rel_error),
                "tolerance: {!r}".format(self.tol),
            ]
        )


class VerificationError(ConstWidthError, AssertionError):
    """
    A mandatory cross-check failed. This signals an implementation bug,
    not bad input.
    """

    def __init__(self, check: str, observed: float, limit: float, details: dict = None):
        self.check = check
        self.observed = observed
        self.limit = limit
        self.details = dict(details) if details else {}
        super().__init__(check, observed, limit)

    def __str__(self):
        return "{}: observed {!r}, allowed {!r}".format(
            self.check, self.observed, self.limit
        )

    def dump(self) -> str:
        lines = [str(self)]
        for k in sorted(self.details):
            lines.append("  {}: {!r}".format(k, self.details[k]))
        return "\n".join(lines)


def handle_numeric_exception(func: callable) -> callable:
    """
    Decorator running `func` with numpy overflow/invalid operations
    promoted to errors, re-raised as `NumericalError`. Division by zero
    stays silent since log(0) = -inf is a legal log-domain value.
    """

    @functools.wraps(func)
    def newfunc(*args, **kwargs):
        try:
            with np.errstate(over="raise", invalid="raise", divide="ignore"):
                return func(*args, **kwargs)
        except (FloatingPointError, OverflowError, ZeroDivisionError) as e:
            raise NumericalError("{}: {}".format(func.__name__, e)) from e

    return newfunc
