import math

import numpy as np
import pytest

from pyvol_constwidth.exceptions import InvalidParameterError, QuadratureError
from pyvol_constwidth.quadrature import adaptive_log_quad, gauss_legendre, gauss_legendre_triangle


def test_gauss_legendre_rule():
    nodes, weights, log_weights = gauss_legendre(32)
    assert weights.sum() == pytest.approx(2.0, abs=1e-14)
    np.testing.assert_allclose(np.exp(log_weights), weights)
    assert not nodes.flags.writeable
    assert np.all(np.abs(nodes) < 1.0)
    with pytest.raises(InvalidParameterError):
        gauss_legendre(1)


def test_polynomial_moments():
    res = adaptive_log_quad(lambda x: np.vstack([2.0 * np.log(x), 3.0 * np.log(x)]), 0.0, 1.0)
    np.testing.assert_allclose(np.exp(res.log_values), [1.0 / 3.0, 1.0 / 4.0], rtol=1e-12)
    assert np.all(res.rel_errors <= 1e-10)


def test_steep_integrand_stays_in_log_space():
    res = adaptive_log_quad(lambda x: 1000.0 * np.log(x), 0.0, 1.0, label="x^1000")
    assert res.log_values[0] == pytest.approx(-math.log(1001.0), abs=1e-9)


def test_huge_values_do_not_overflow():
    # integral of exp(2000 x) over [0, 1]
    res = adaptive_log_quad(lambda x: 2000.0 * x, 0.0, 1.0)
    expected = 2000.0 + math.log1p(-math.exp(-2000.0)) - math.log(2000.0)
    assert res.log_values[0] == pytest.approx(expected, abs=1e-9)


def test_panel_budget_exhausted():
    with pytest.raises(QuadratureError) as exc:
        adaptive_log_quad(lambda x: 0.5 * np.log(x), 0.0, 1.0, rel_tol=1e-300, max_panels=20, label="sqrt")
    assert exc.value.panels >= 20
    assert "sqrt" in str(exc.value)
    assert "panels: " in exc.value.dump()


def test_bad_limits():
    with pytest.raises(InvalidParameterError):
        adaptive_log_quad(lambda x: x, 1.0, 0.0)
    with pytest.raises(InvalidParameterError):
        adaptive_log_quad(lambda x: x, 0.0, 1.0, rel_tol=0.0)


def test_triangle_rule():
    assert gauss_legendre_triangle(lambda a, b: np.ones_like(a))[0] == pytest.approx(0.5)
    assert gauss_legendre_triangle(lambda a, b: b)[0] == pytest.approx(1.0 / 6.0)
    assert gauss_legendre_triangle(lambda a, b: a * b)[0] == pytest.approx(1.0 / 24.0)
