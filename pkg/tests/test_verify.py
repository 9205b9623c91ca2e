import math

import numpy as np
import pytest
from scipy import stats

from cmvrmt import densities as dens
from cmvrmt import verify


def test_ks_critical_values():
    c = math.sqrt(-math.log(5e-4) / 2)
    assert verify.ks_critical(100) == pytest.approx(c / 10)
    assert verify.ks_critical(100, 400) == pytest.approx(c * math.sqrt(500 / 40000))


def test_ks_statistic_matches_scipy(rng):
    x = rng.normal(size=500)
    assert verify.ks_statistic(x, stats.norm.cdf) == pytest.approx(
        stats.kstest(x, "norm").statistic, abs=1e-12)
    y = rng.normal(0.1, size=300)
    assert verify.ks2_statistic(x, y) == pytest.approx(stats.ks_2samp(x, y).statistic, abs=1e-12)


def test_uniform_calibration():
    passes = sum(
        verify.ks_one_sample(np.random.default_rng(s).random(1000), lambda x: x).passed
        for s in range(200))
    assert passes >= 196


def test_shifted_sample_fails(rng):
    assert not verify.ks_one_sample(rng.random(5000) ** 1.2, lambda x: x).passed


def test_two_sample_detects_difference(rng):
    assert verify.ks_two_sample(rng.random(2000), rng.random(2000)).passed
    assert not verify.ks_two_sample(rng.random(2000), 0.9 * rng.random(2000)).passed


def test_chi2_bins(rng):
    fair = rng.choice([-1.0, 1.0], size=10_000)
    assert verify.chi2_bins(fair, {-1.0: 0.5, 1.0: 0.5}).passed
    biased = rng.choice([-1.0, 1.0], size=10_000, p=[0.45, 0.55])
    assert not verify.chi2_bins(biased, {-1.0: 0.5, 1.0: 0.5}).passed
    assert verify.chi2_bins(fair, {-1.0: 0.5, 1.0: 0.5}).threshold == pytest.approx(
        stats.chi2.ppf(0.999, 1))


def test_sample_guards():
    with pytest.raises(ValueError):
        verify.ks_one_sample([], lambda x: x)
    with pytest.raises(ValueError):
        verify.ks_one_sample(np.linspace(0, 1, 10), lambda x: x)
    with pytest.raises(ValueError):
        verify.chi2_bins(np.zeros(200), {1.0: 1.0})


def test_roots_jacobian_n1_complex_is_one():
    rep = verify.jacobian_fd_roots_to_coeffs([0.3 + 0.2j])
    assert rep.detail["closed"] == 1.0
    assert rep.passed


def test_roots_jacobian_n1_real_is_minus_one():
    rep = verify.jacobian_fd_roots_to_coeffs([0.3])
    assert rep.detail["fd"] == pytest.approx(-1.0)
    assert rep.passed


def test_coefficient_jacobian_n1():
    assert verify.jacobian_closed_form([0.4 + 0.1j], real=False) == -1.0
    rep = verify.jacobian_fd_coeffs_to_alphas([0.4 + 0.1j])
    assert rep.detail["fd"] == pytest.approx(-1.0)


@pytest.mark.parametrize("real", [False, True])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_jacobians_random(rng, n, real):
    a = 0.8 * (2 * rng.random(n) - 1) if real else 0.8 * np.sqrt(rng.random(n)) * np.exp(
        2j * np.pi * rng.random(n))
    assert verify.jacobian_fd_coeffs_to_alphas(a).passed
    z = rng.uniform(-1, 1, n) if real else rng.normal(size=n) + 1j * rng.normal(size=n)
    assert verify.jacobian_fd_roots_to_coeffs(z).passed


def test_near_coincident_roots_warn():
    with pytest.warns(RuntimeWarning):
        verify.jacobian_fd_roots_to_coeffs([0.1, 0.1001])


def test_report_line_and_dict():
    rep = verify.TestReport("x", 0.5, 1.0, (3,), 1, True, "ks1")
    assert rep.line().startswith("PASS x: ks1")
    assert rep.to_dict()["sizes"] == [3]
    rep = verify.TestReport("y", math.inf, 1.0)
    assert rep.line().startswith("FAIL")
    assert rep.to_dict()["statistic"] == "inf"


@pytest.mark.parametrize("name", sorted(verify.CHECKS))
def test_quick_checks_pass(name):
    rep = verify.run_check(name, "quick")
    assert rep.passed, rep.line()
    assert rep.detail["check"] == name


def test_corrupted_constant_is_caught(monkeypatch):
    real = dens._log_D
    monkeypatch.setattr(dens, "_log_D", lambda n, beta: real(n, beta) + 0.05)
    assert not verify.run_check("normalizations", "quick").passed


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify.run_suite("huge")
