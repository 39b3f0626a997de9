import logging
import math

import numpy as np
import pytest

from pyvol_constwidth.body import SQRT2, TWO_MINUS_SQRT2
from pyvol_constwidth.datamodel import RadiusRow
from pyvol_constwidth.exceptions import InvalidDimensionError, InvalidParameterError, QuadratureError
from pyvol_constwidth.specfun import log_unit_ball_volume, logsumexp
from pyvol_constwidth.quadrature import DEFAULT_REL_TOL
from pyvol_constwidth.verify import volumes_agree
from pyvol_constwidth.volume import (
    uniform_epsilon,
    effective_threshold,
    exact_volume,
    mc_volume,
    mc_volume_radial,
    moment_integral,
    moment_integrals,
    orthant_breakdown,
    radius_table,
)

VOL_2 = 3.0 * math.pi - SQRT2 * math.pi - 2.0


def test_moment_integral_examples():
    assert moment_integral(1, 2).log_value == pytest.approx(math.log(math.pi / 2.0 - 1.0), abs=1e-10)
    # b sqrt(4 - (b + sqrt(2))^2) integrated over [0, 2 - sqrt(2)]
    i13 = 2.0 * SQRT2 / 3.0 - SQRT2 * (math.pi / 2.0 - 1.0)
    assert moment_integral(1, 3).value == pytest.approx(i13, rel=1e-9)
    i23 = 8.0 / 3.0 - 5.0 * SQRT2 / 3.0
    assert moment_integral(2, 3).value == pytest.approx(i23, rel=1e-9)


def test_moment_integral_range():
    with pytest.raises(InvalidParameterError):
        moment_integral(0, 3)
    with pytest.raises(InvalidParameterError):
        moment_integral(3, 3)
    with pytest.raises(InvalidDimensionError):
        moment_integral(1, 1)


def test_moment_integrals_share_panels():
    shared = moment_integrals(12)
    assert [m.k for m in shared] == list(range(1, 12))
    for m in shared:
        single = moment_integral(m.k, 12)
        assert m.log_value == pytest.approx(single.log_value, abs=1e-9)
        assert m.est_abs_error <= 1e-10


def test_moment_integral_decreases_in_n():
    logs = [moment_integral(1, n).log_value for n in range(3, 40)]
    assert all(b < a for a, b in zip(logs, logs[1:]))


def test_moment_integral_budget():
    with pytest.raises(QuadratureError):
        moment_integral(1, 3, rel_tol=1e-300, max_panels=20)


def test_exact_volume_n2():
    res = exact_volume(2)
    assert res.volume == pytest.approx(VOL_2, rel=1e-9)
    assert res.effective_radius == pytest.approx(math.sqrt(VOL_2 / math.pi), rel=1e-9)
    assert res.method == "quadrature"


def test_orthant_breakdown_n2():
    terms = orthant_breakdown(2)
    assert [t.k for t in terms] == [0, 1, 2]
    assert math.exp(terms[-1].log_total) == pytest.approx(math.pi / 2.0)
    assert math.exp(terms[0].log_total) == pytest.approx(math.pi * TWO_MINUS_SQRT2 ** 2 / 4.0)
    assert math.exp(terms[1].log_total) == pytest.approx(2.0 * (math.pi / 2.0 - 1.0))


@pytest.mark.parametrize("n", [2, 3, 7, 25])
def test_orthant_breakdown_sums_to_volume(n):
    terms = orthant_breakdown(n)
    assert logsumexp([t.log_total for t in terms]) == pytest.approx(exact_volume(n).log_volume, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 5, 10, 20, 60])
def test_effective_radius_range(n):
    res = exact_volume(n)
    assert TWO_MINUS_SQRT2 < res.effective_radius < 1.0
    assert res.log_volume == pytest.approx(log_unit_ball_volume(n) + n * math.log(res.effective_radius), abs=1e-10)


@pytest.mark.parametrize("n", [2, 10, 100, pytest.param(1000, marks=pytest.mark.slow)])
def test_quadrature_stable_under_tighter_tolerance(n):
    coarse = exact_volume(n, rel_tol=DEFAULT_REL_TOL)
    fine = exact_volume(n, rel_tol=DEFAULT_REL_TOL / 2.0)
    assert abs(fine.log_volume - coarse.log_volume) < 1e-9


def test_strictly_below_ball_at_small_n():
    for n in range(2, 21):
        assert exact_volume(n).effective_radius < 1.0 - 1e-3


@pytest.mark.parametrize("n", [2, 3])
def test_mc_rejection_agrees(n):
    exact = exact_volume(n)
    est = mc_volume(n, 200_000, seed=1)
    assert est.method == "mc_rejection"
    assert est.ci_low < est.volume < est.ci_high
    assert volumes_agree(exact, est)


def test_mc_is_deterministic():
    a = mc_volume(3, 50_000, seed=5)
    b = mc_volume(3, 50_000, seed=5)
    c = mc_volume(3, 50_000, seed=6)
    assert a.log_volume == b.log_volume
    assert a.log_volume != c.log_volume
    r1 = mc_volume_radial(4, 30_000, seed=5)
    r2 = mc_volume_radial(4, 30_000, seed=5)
    assert r1.to_dict() == r2.to_dict()


def test_mc_rejects_bad_samples():
    with pytest.raises(InvalidParameterError):
        mc_volume(2, 0)
    with pytest.raises(InvalidParameterError):
        mc_volume_radial(2, 1)


@pytest.mark.parametrize("n", [2, 5, 8])
def test_mc_radial_agrees(n):
    assert volumes_agree(exact_volume(n), mc_volume_radial(n, 200_000, seed=2))


def test_mc_radial_accumulator_with_constant_radius():
    def positive_directions(generator, count, n):
        g = np.abs(generator.standard_normal((count, n)))
        return g / np.linalg.norm(g, axis=1, keepdims=True)

    n = 6
    res = mc_volume_radial(n, 1000, seed=0, direction_sampler=positive_directions)
    assert res.log_volume == pytest.approx(log_unit_ball_volume(n) + n * math.log(SQRT2), abs=1e-12)
    assert res.ci_half_width() == pytest.approx(0.0, abs=1e-9)


def test_mc_radial_warns_on_small_effective_sample(caplog):
    with caplog.at_level(logging.WARNING, logger="pyvol_constwidth.volume"):
        mc_volume_radial(200, 20_000, seed=0)
    assert any("effective sample size" in r.getMessage() for r in caplog.records)


def test_mc_radial_quiet_in_low_dimension(caplog):
    with caplog.at_level(logging.WARNING, logger="pyvol_constwidth.volume"):
        mc_volume_radial(3, 20_000, seed=0)
    assert not caplog.records


@pytest.mark.slow
def test_mc_radial_agrees_n50():
    assert volumes_agree(exact_volume(50), mc_volume_radial(50, 10 ** 6, seed=3))


@pytest.mark.slow
@pytest.mark.parametrize("n", range(2, 11))
def test_three_way_volume_agreement(n):
    exact = exact_volume(n)
    rejection = mc_volume(n, 10 ** 7, seed=11)
    radial = mc_volume_radial(n, 10 ** 6, seed=12)
    assert volumes_agree(exact, rejection)
    assert volumes_agree(exact, radial)
    assert volumes_agree(rejection, radial)


def test_radius_table():
    table = radius_table(2, 10)
    assert [r.n for r in table] == list(range(2, 11))
    assert all(r.is_ordered() for r in table)
    first = table[0]
    assert first.r_lower_schramm == pytest.approx(math.sqrt(11.0 / 3.0) - 1.0)
    assert set(first.to_dict()) == {"n", "r_exact", "r_schramm_lower", "r_eq4_upper"}


def test_radius_table_step_keeps_last():
    assert [r.n for r in radius_table(2, 7, step=2)] == [2, 4, 6, 7]
    with pytest.raises(InvalidParameterError):
        radius_table(5, 3)


def test_effective_threshold():
    rows = [RadiusRow(n, r, 0.0, 1.0) for n, r in [(2, 0.95), (3, 0.89), (4, 0.91), (5, 0.89), (6, 0.88)]]
    assert effective_threshold(rows) == 5
    assert effective_threshold(rows[:3]) is None


def test_uniform_epsilon():
    eps = uniform_epsilon(8)
    assert 0.0 < eps <= 0.1
    assert eps == pytest.approx(min(0.1, min(1.0 - exact_volume(n).effective_radius for n in range(2, 9))))


@pytest.mark.slow
@pytest.mark.parametrize("n", [200, 500, 1000])
def test_effective_radius_below_0_9(n):
    r = exact_volume(n).effective_radius
    assert r < 0.9
    if n == 1000:
        assert r > 0.8907


@pytest.mark.slow
def test_bound_chain_over_many_dimensions():
    table = radius_table(2, 1000, step=50)
    assert len(table) >= 20
    assert all(r.is_ordered() for r in table)
    assert table.threshold is not None
