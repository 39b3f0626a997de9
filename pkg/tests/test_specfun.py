import math

import numpy as np
import pytest

from pyvol_constwidth.exceptions import InvalidDimensionError, InvalidParameterError
from pyvol_constwidth.specfun import (
    DimensionalConstants,
    check_dimension,
    log_beta,
    log_binomial,
    log_binomials,
    log_sphere_area,
    log_unit_ball_volume,
    log_unit_ball_volumes,
    logsumexp,
)


@pytest.mark.parametrize(
    "n, volume",
    [(1, 2.0), (2, math.pi), (3, 4.0 * math.pi / 3.0), (4, math.pi ** 2 / 2.0)],
)
def test_unit_ball_volume_small_n(n, volume):
    assert log_unit_ball_volume(n) == pytest.approx(math.log(volume), abs=1e-13)


def test_unit_ball_volume_recursion():
    log_Omega = log_unit_ball_volumes(1000)
    n = np.arange(2, 1001)
    np.testing.assert_allclose(log_Omega[n] - log_Omega[n - 2], np.log(2.0 * math.pi / n), atol=1e-10)
    assert log_Omega[0] == 0.0


def test_unit_ball_volume_huge_n():
    value = log_unit_ball_volume(10 ** 6)
    assert math.isfinite(value)
    assert value < 0


def test_dimensional_constants():
    c = DimensionalConstants(3)
    assert c.ball_volume == pytest.approx(4.0 * math.pi / 3.0)
    assert c.sphere_area == pytest.approx(4.0 * math.pi)
    assert log_sphere_area(2) == pytest.approx(math.log(2.0 * math.pi))
    assert set(c.to_dict()) == {"n", "log_omega_n", "log_Omega_n"}


def test_log_binomial_against_integers():
    assert log_binomial(50, 25) == pytest.approx(math.log(126410606437752), rel=1e-13)
    for n, k in [(10, 3), (100, 37), (300, 150)]:
        assert log_binomial(n, k) == pytest.approx(math.log(math.comb(n, k)), abs=1e-10)


def test_log_binomial_symmetry_is_exact():
    for n in range(1, 80):
        for k in range(n + 1):
            assert log_binomial(n, k) == log_binomial(n, n - k)
        vec = log_binomials(n)
        assert np.array_equal(vec, vec[::-1])


def test_log_binomial_edges():
    assert log_binomial(7, 0) == 0.0
    assert log_binomial(7, 7) == 0.0
    with pytest.raises(InvalidParameterError):
        log_binomial(5, 6)
    with pytest.raises(InvalidParameterError):
        log_binomial(5, -1)


@pytest.mark.parametrize("bad", [0, -3, 2.5, True, "3"])
def test_check_dimension_rejects(bad):
    with pytest.raises(InvalidDimensionError):
        check_dimension(bad)


def test_check_dimension_error_is_value_error():
    with pytest.raises(ValueError):
        log_unit_ball_volume(0)


def test_log_beta():
    assert log_beta(2, 3) == pytest.approx(math.log(1.0 / 12.0))
    with pytest.raises(InvalidParameterError):
        log_beta(0, 1)


def test_logsumexp():
    assert logsumexp([]) == -math.inf
    assert logsumexp([-math.inf, -math.inf]) == -math.inf
    assert logsumexp([0.0, 0.0]) == pytest.approx(math.log(2.0))
    assert logsumexp([1000.0, 1000.0]) == pytest.approx(1000.0 + math.log(2.0))


def test_pascal_rule():
    for n in range(2, 61):
        for k in range(1, n):
            lhs = math.exp(log_binomial(n, k))
            rhs = math.exp(log_binomial(n - 1, k)) + math.exp(log_binomial(n - 1, k - 1))
            assert abs(lhs - rhs) / math.comb(n, k) < 1e-12, (n, k)
