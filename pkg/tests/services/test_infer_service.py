"""Tests for sandwich covariance, intervals and reparametrisation."""

import math

import numpy as np
import pytest

from larchfit.exceptions import ArgumentError, DomainError, SingularMatrixError
from larchfit.schemas.estimate import ContrastKind, FitOptions
from larchfit.schemas.model import ModelDefinition, ModelSpec
from larchfit.schemas.noise import NoiseSpec
from larchfit.schemas.trajectory import SimConfig
from larchfit.services.estimate_service import fit
from larchfit.services.infer_service import (
    asymptotic_cov,
    confidence_intervals,
    default_mask,
    gamma_hats,
    rescale_to_l2,
    run_inference,
    sigma_xi_hat,
    sigma_xi_hat_with_hits,
    studentized_statistic,
    theta_to_l1,
)
from larchfit.services.noise_service import noise_moments
from larchfit.services.simulate_service import larch1_fourth_moment, simulate, theoretical_sigma2

HALF_PI = math.pi / 2


def test_sandwich_identity():
    cov = asymptotic_cov(np.eye(3), np.eye(3), 2.0, 100)
    np.testing.assert_allclose(cov.cov, np.eye(3) / 100)
    assert cov.condition_number == pytest.approx(1.0)


def test_sandwich_scales_with_n(rng):
    a = rng.normal(size=(3, 3))
    g1 = a @ a.T + np.eye(3)
    b = rng.normal(size=(3, 3))
    g2 = b @ b.T + np.eye(3)
    small = asymptotic_cov(g1, g2, 1.8, 250).cov
    large = asymptotic_cov(g1, g2, 1.8, 1000).cov
    np.testing.assert_allclose(large, small / 4, rtol=1e-12)
    inv = np.linalg.inv(g1)
    np.testing.assert_allclose(small, 0.8 * inv @ g2 @ inv / 250, rtol=1e-10)


def test_sandwich_rejects_singular_matrices():
    with pytest.raises(SingularMatrixError) as info:
        asymptotic_cov(np.diag([1.0, 0.0]), np.eye(2), 2.0, 10)
    assert info.value.condition_number > 1e12 or math.isinf(info.value.condition_number)
    with pytest.raises(SingularMatrixError):
        asymptotic_cov(np.diag([1.0, -1.0]), np.eye(2), 2.0, 10)
    with pytest.raises(ArgumentError):
        asymptotic_cov(np.eye(2), np.eye(2), 2.0, 0)


def test_intervals_from_zero_covariance():
    intervals = confidence_intervals([1.0, 2.0], np.zeros((2, 2)), 0.95)
    assert [(ci.lower, ci.upper) for ci in intervals] == [(1.0, 1.0), (2.0, 2.0)]


def test_interval_half_width():
    (ci,) = confidence_intervals([0.0], np.eye(1), 0.95, names=["a0"])
    assert ci.coordinate == "a0"
    assert ci.half_width == pytest.approx(1.959964, abs=1e-6)


def test_interval_arguments():
    with pytest.raises(ArgumentError):
        confidence_intervals([0.0], np.eye(1), 1.0)
    with pytest.raises(DomainError):
        confidence_intervals([0.0], -np.eye(1), 0.9)


def test_default_masks():
    assert default_mask(ModelSpec.larch(2)) == [True, True, True]
    assert default_mask(ModelSpec.glarch(1, 2)) == [True, True, False, False]
    assert default_mask(ModelSpec.long_memory()) == [True, True, False]


def test_rescale_and_inverse():
    theta = [5.0, -0.2, 0.4]
    assert rescale_to_l2(theta, 3.0, [False] * 3).tolist() == theta
    scaled = rescale_to_l2(theta, math.sqrt(HALF_PI), default_mask(ModelSpec.larch(2)))
    np.testing.assert_allclose(scaled, np.array(theta) * math.sqrt(HALF_PI))
    glarch = rescale_to_l2([2.0, 0.3, -0.6], 2.0, default_mask(ModelSpec.glarch(1, 1)))
    np.testing.assert_allclose(glarch, [4.0, 0.6, -0.6])
    np.testing.assert_allclose(theta_to_l1(glarch, 2.0, [True, True, False]), [2.0, 0.3, -0.6])
    with pytest.raises(ArgumentError):
        rescale_to_l2(theta, 0.0, [True] * 3)
    with pytest.raises(ArgumentError):
        rescale_to_l2(theta, 1.0, [True])


def test_gamma_hats_larch1_exact(larch1, gaussian):
    x = simulate(larch1, gaussian, 500, SimConfig(burn_in=100, trunc_K=1), seed=3).x
    g1, g2 = gamma_hats(larch1.spec, [1.0, 0.3], x, 1)
    lagged = np.concatenate(([0.0], x[:-1]))
    m = 1.0 + 0.3 * lagged
    assert g1[0, 0] == 1.0
    assert g1[0, 1] == pytest.approx(np.mean(lagged), rel=1e-12)
    assert g1[1, 1] == pytest.approx(np.mean(lagged**2), rel=1e-12)
    assert g2[1, 1] == pytest.approx(np.mean(m**2 * lagged**2), rel=1e-12)
    np.testing.assert_array_equal(g1, g1.T)
    np.testing.assert_array_equal(g2, g2.T)


def test_gamma_hats_are_positive_semidefinite(glarch11, gaussian):
    x = simulate(glarch11, gaussian, 400, SimConfig(burn_in=100), seed=8).x
    for matrix in gamma_hats(glarch11.spec, glarch11.theta, x, 100):
        assert np.min(np.linalg.eigvalsh(matrix)) >= -1e-10 * np.trace(matrix)


def test_sigma_xi_hat_proportional_series():
    c = 1.5
    x = np.empty(50)
    previous = 0.0
    for t in range(50):
        x[t] = c * (1.0 + 0.3 * previous)
        previous = x[t]
    value, hits = sigma_xi_hat_with_hits(ModelSpec.larch(1), [1.0, 0.3], x, 1)
    assert value == pytest.approx(c**2, rel=1e-12)
    assert hits == 0


def test_sigma_xi_hat_guard(caplog):
    x = np.ones(10)
    value, hits = sigma_xi_hat_with_hits(ModelSpec.larch(1), [1.0, 0.0], x, 1, eps_guard=4.0)
    assert hits == 10
    assert value == pytest.approx(0.25)
    assert "guard active" in caplog.text
    with pytest.raises(ArgumentError):
        sigma_xi_hat(ModelSpec.larch(1), [1.0, 0.0], x, 1, eps_guard=-1.0)


def test_studentized_statistic_whitens():
    cov = asymptotic_cov(np.eye(2), np.diag([4.0, 9.0]), 2.0, 1)
    z = studentized_statistic([3.0, 4.0], [1.0, 1.0], cov)
    np.testing.assert_allclose(z, [1.0, 1.0])


def test_run_inference_report(larch2_path):
    estimate = fit(ModelSpec.larch(2), larch2_path, ContrastKind.lav(), FitOptions(starts=3))
    report = run_inference(estimate, larch2_path.x, level=0.9, rescale=True)
    assert report.level == 0.9
    assert [ci.coordinate for ci in report.intervals] == ["a0", "a1", "a2"]
    assert report.covariance.n == 1000
    assert report.covariance.sigma_xi2_hat > 1.0
    assert report.theta_l2 is not None
    scale = math.sqrt(report.covariance.sigma_xi2_hat)
    np.testing.assert_allclose(report.theta_l2, np.array(estimate.theta_hat) * scale)
    assert all(ci.lower < ci.estimate < ci.upper for ci in report.intervals)


@pytest.mark.slow
def test_gamma_limits_larch1():
    theta = [1.0, 0.3]
    model = ModelDefinition(family="larch", p=1, theta=theta)
    moments = noise_moments(NoiseSpec.gaussian())
    x = simulate(model, NoiseSpec.gaussian(), 1_000_000, SimConfig(), seed=99).x
    g1, g2 = gamma_hats(model.spec, theta, x, 1)
    s2 = theoretical_sigma2(model.spec, theta, moments.sigma_xi2)
    m4 = larch1_fourth_moment(theta, moments.sigma_xi2, moments.mu4)
    a0, a1 = theta
    np.testing.assert_allclose(np.diag(g1), [1.0, s2], rtol=0.03)
    expected_g2 = np.array(
        [
            [a0**2 + a1**2 * s2, 2 * a0 * a1 * s2],
            [2 * a0 * a1 * s2, a0**2 * s2 + a1**2 * m4],
        ]
    )
    np.testing.assert_allclose(g2, expected_g2, rtol=0.03)


@pytest.mark.slow
@pytest.mark.parametrize(
    ("noise", "target"), [(NoiseSpec.gaussian(), HALF_PI), (NoiseSpec.student(6), 16 / 9)]
)
def test_sigma_xi_hat_consistency(larch2, noise, target):
    x = simulate(larch2, noise, 100_000, SimConfig(burn_in=2000, trunc_K=5), seed=17).x
    estimate = fit(larch2.spec, x, ContrastKind.lav(), FitOptions(starts=3))
    value = sigma_xi_hat(larch2.spec, estimate.theta_hat, x, estimate.trunc_K)
    assert value == pytest.approx(target, rel=0.05)


@pytest.mark.slow
def test_interval_coverage_larch1(larch1):
    reps, n = 500, 5000
    hits = np.zeros(2)
    for r in range(reps):
        cfg = SimConfig(burn_in=500, trunc_K=1)
        x = simulate(larch1, NoiseSpec.gaussian(), n, cfg, seed=(7, r)).x
        estimate = fit(larch1.spec, x, ContrastKind.lav(), FitOptions(starts=2), seed=r)
        report = run_inference(estimate, x, level=0.95)
        for i, ci in enumerate(report.intervals):
            hits[i] += ci.lower <= larch1.theta[i] <= ci.upper
    coverage = hits / reps
    assert np.all((coverage >= 0.90) & (coverage <= 0.98))
