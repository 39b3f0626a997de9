import math

import pytest

from pyvol_constwidth import verify
from pyvol_constwidth.datamodel import CheckResult, VolumeResult
from pyvol_constwidth.volume import exact_volume


def scaled_estimate(n, factor, method, half=1e-6):
    log_volume = exact_volume(n).log_volume + math.log(factor)
    return VolumeResult(n, log_volume, 1.0, method, log_ci_low=log_volume - half, log_ci_high=log_volume + half)


def test_specfun_check():
    result = verify.check_specfun()
    assert result.passed, result.detail
    assert result.value < verify.SPECFUN_TOL


def test_oracle_equivalence_check():
    result = verify.check_oracle_equivalence(5000, seed=3, dimensions=(2, 3, 10))
    assert result.passed, result.detail
    assert result.value == 0


def test_width_sweep_check():
    result = verify.check_width_sweep(5000, seed=1)
    assert result.passed
    assert result.value < verify.WIDTH_TOL


def test_max_width_deviation_is_deterministic():
    assert verify.max_width_deviation(7, 3000, seed=11) == verify.max_width_deviation(7, 3000, seed=11)


def test_triangle_moment_identity_check():
    result = verify.check_triangle_moment_identity(12)
    assert result.passed, result.detail
    assert result.name == "triangle_moment_identity"


def test_s_routes_check():
    result = verify.check_s_routes()
    assert result.passed, result.detail
    assert "s = 1.78" in result.detail


def test_bound_chain_check():
    result = verify.check_bound_chain(dimensions=(2, 3, 10, 100))
    assert result.passed, result.detail
    assert result.value == 0


def test_volume_agreement_check():
    result = verify.check_volume_agreement(200000, seed=0, dimensions=(2, 3))
    assert result.passed, result.detail


def test_estimator_seeds():
    rejection, radial = verify.estimator_seeds(0, 4)
    assert rejection != radial
    assert (rejection, radial) == verify.estimator_seeds(0, 4)
    assert verify.estimator_seeds(0, 5) != (rejection, radial)


def test_volumes_agree_uses_wider_interval():
    narrow = scaled_estimate(3, 1.0, "mc_radial")
    assert not verify.volumes_agree(narrow, scaled_estimate(3, 1.05, "mc_radial"))
    # 5% apart, but the reference interval is about 10% wide
    wide = scaled_estimate(3, 1.0, "mc_rejection", half=0.1)
    assert verify.volumes_agree(wide, scaled_estimate(3, 1.05, "mc_radial"))
    assert verify.volumes_agree(scaled_estimate(3, 1.05, "mc_radial"), wide)


def test_volume_agreement_compares_estimators_with_each_other(monkeypatch):
    monkeypatch.setattr(verify, "mc_volume", lambda n, samples, seed: scaled_estimate(n, 0.993, "mc_rejection"))
    monkeypatch.setattr(verify, "mc_volume_radial", lambda n, samples, seed: scaled_estimate(n, 1.007, "mc_radial"))
    result = verify.check_volume_agreement(10, dimensions=(2, 3))
    assert not result.passed
    assert "n=2 mc_rejection/mc_radial" in result.detail
    assert "quadrature/" not in result.detail


def test_check_result_line():
    assert CheckResult("width_sweep", True, detail="ok").line() == "PASS width_sweep: ok"
    assert CheckResult("bound_chain", False).line() == "FAIL bound_chain"


@pytest.mark.slow
def test_run_all_order():
    results = verify.run_all(samples=20000, seed=0)
    assert [r.name for r in results] == [
        "specfun",
        "oracle_equivalence",
        "width_sweep",
        "triangle_moment_identity",
        "s_route_agreement",
        "volume_agreement",
        "bound_chain",
    ]
    assert all(r.passed for r in results)
