"""Service for sandwich asymptotic covariance, confidence intervals and reparametrisation."""

import logging

import numpy as np
import numpy.typing as npt
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigh
from scipy.stats import norm

from larchfit.config import get_settings
from larchfit.exceptions import ArgumentError, DomainError, SingularMatrixError
from larchfit.schemas.estimate import EstimateResult
from larchfit.schemas.infer import ConfidenceInterval, InferenceReport, SandwichCovariance
from larchfit.schemas.model import Family, ModelSpec
from larchfit.services.estimate_service import (
    SeriesLike,
    as_series,
    lag_filter,
    m_tilde_series,
    normalized_square_ratio,
)
from larchfit.services.model_service import (
    ThetaLike,
    coordinate_names,
    expand_coefficients,
    grad_coefficients,
)

logger = logging.getLogger(__name__)

Matrix = npt.NDArray[np.float64]


def _symmetrize(a: Matrix) -> Matrix:
    return 0.5 * (a + a.T)


def gamma_hats(
    spec: ModelSpec, theta_hat: ThetaLike, x: SeriesLike, trunc_K: int
) -> tuple[Matrix, Matrix]:
    """Plug-in estimates of Gamma1 = E[dM dM'] and Gamma2 = E[M^2 dM dM'].

    dM_t = d a_0 + sum_{k=1}^{min(t-1, trunc_K)} d a_k X_{t-k}, the truncated gradient of M~_t.
    """
    arr = as_series(x)
    n = arr.shape[0]
    table = grad_coefficients(spec, theta_hat, trunc_K)
    assert table.grads is not None
    G = np.empty((n, spec.d))
    for i in range(spec.d):
        G[:, i] = table.grads[i, 0] + lag_filter(table.grads[i, 1:], arr)
    m = m_tilde_series(table, arr)
    gamma1 = G.T @ G / n
    gamma2 = (G * (m**2)[:, None]).T @ G / n
    return _symmetrize(gamma1), _symmetrize(gamma2)


def sigma_xi_hat(
    spec: ModelSpec,
    theta_hat: ThetaLike,
    x: SeriesLike,
    trunc_K: int,
    eps_guard: float | None = None,
) -> float:
    """(1/n) sum X_t^2 / max(M~_t^2, eps_guard); guard activations are logged."""
    value, _ = sigma_xi_hat_with_hits(spec, theta_hat, x, trunc_K, eps_guard)
    return value


def sigma_xi_hat_with_hits(
    spec: ModelSpec,
    theta_hat: ThetaLike,
    x: SeriesLike,
    trunc_K: int,
    eps_guard: float | None = None,
) -> tuple[float, int]:
    if eps_guard is None:
        eps_guard = get_settings().SIGMA_GUARD
    if eps_guard < 0:
        raise ArgumentError(f"eps_guard must be >= 0, got {eps_guard}")
    arr = as_series(x)
    m = m_tilde_series(expand_coefficients(spec, theta_hat, trunc_K), arr)
    value, hits = normalized_square_ratio(m, arr, eps_guard)
    if hits:
        logger.warning(f"sigma_xi2 guard active on {hits} of {arr.shape[0]} observations")
    return value, hits


def asymptotic_cov(
    gamma1_hat: Matrix,
    gamma2_hat: Matrix,
    sigma_xi2_hat: float,
    n: int,
    cond_limit: float | None = None,
) -> SandwichCovariance:
    """(sigma_xi2_hat - 1) Gamma1^-1 Gamma2 Gamma1^-1 / n via a Cholesky factor of Gamma1."""
    if cond_limit is None:
        cond_limit = get_settings().COND_LIMIT
    if n < 1:
        raise ArgumentError(f"n must be >= 1, got {n}")
    g1 = np.asarray(gamma1_hat, dtype=np.float64)
    g2 = np.asarray(gamma2_hat, dtype=np.float64)
    condition = float(np.linalg.cond(g1))
    if not np.isfinite(condition) or condition > cond_limit:
        raise SingularMatrixError("Gamma1 is singular", condition)
    try:
        factor = cho_factor(g1)
    except LinAlgError:
        raise SingularMatrixError("Gamma1 is not positive definite", condition) from None
    left = cho_solve(factor, g2)
    sandwich = cho_solve(factor, left.T).T
    cov = _symmetrize((sigma_xi2_hat - 1.0) * sandwich / n)
    return SandwichCovariance(
        gamma1_hat=g1,
        gamma2_hat=g2,
        sigma_xi2_hat=sigma_xi2_hat,
        cov=cov,
        n=n,
        condition_number=condition,
    )


def confidence_intervals(
    theta_hat: ThetaLike,
    cov: Matrix,
    level: float,
    names: list[str] | None = None,
) -> list[ConfidenceInterval]:
    """theta_i +- z_{(1+level)/2} sqrt(cov_ii)."""
    if not 0 < level < 1:
        raise ArgumentError(f"level must lie in (0, 1), got {level}")
    theta = np.asarray(theta_hat, dtype=np.float64)
    variances = np.diag(np.asarray(cov, dtype=np.float64))
    if np.any(variances < 0):
        raise DomainError(f"negative variance on the covariance diagonal: {variances.tolist()}")
    z = float(norm.ppf((1.0 + level) / 2.0))
    labels = names or [f"theta{i}" for i in range(theta.shape[0])]
    intervals: list[ConfidenceInterval] = []
    for label, estimate, variance in zip(labels, theta, variances, strict=True):
        half = z * float(np.sqrt(variance))
        intervals.append(
            ConfidenceInterval(
                coordinate=label,
                estimate=float(estimate),
                lower=float(estimate - half),
                upper=float(estimate + half),
                half_width=half,
            )
        )
    return intervals


def default_mask(spec: ModelSpec) -> list[bool]:
    """Coordinates that scale with ||xi||_2: all but the Glarch d_j and the memory parameter."""
    match spec.family:
        case Family.LARCH:
            return [True] * spec.d
        case Family.GLARCH:
            return [True] * (spec.p_order + 1) + [False] * spec.q_order
        case Family.LONG_MEMORY:
            return [True, True, False]


def rescale_to_l2(theta_hat: ThetaLike, sigma_xi_hat_sqrt: float, mask: list[bool]) -> Matrix:
    """Multiply the masked coordinates by ||xi||_2, giving the ||xi'||_2 = 1 parametrisation."""
    if sigma_xi_hat_sqrt <= 0:
        raise ArgumentError(f"||xi||_2 must be > 0, got {sigma_xi_hat_sqrt}")
    theta = np.asarray(theta_hat, dtype=np.float64).copy()
    if len(mask) != theta.shape[0]:
        raise ArgumentError(f"mask has {len(mask)} entries for {theta.shape[0]} coordinates")
    theta[np.asarray(mask, dtype=bool)] *= sigma_xi_hat_sqrt
    return theta


def theta_to_l1(theta_l2: ThetaLike, sigma_xi_hat_sqrt: float, mask: list[bool]) -> Matrix:
    """Inverse of rescale_to_l2."""
    if sigma_xi_hat_sqrt <= 0:
        raise ArgumentError(f"||xi||_2 must be > 0, got {sigma_xi_hat_sqrt}")
    return rescale_to_l2(theta_l2, 1.0 / sigma_xi_hat_sqrt, mask)


def _inverse_sqrt(a: Matrix) -> Matrix:
    values, vectors = eigh(_symmetrize(a))
    if np.any(values <= 0):
        raise SingularMatrixError("covariance is not positive definite", float("inf"))
    return (vectors / np.sqrt(values)) @ vectors.T


def studentized_statistic(
    theta_hat: ThetaLike, theta_star: ThetaLike, covariance: SandwichCovariance
) -> Matrix:
    """cov^{-1/2} (theta_hat - theta_star), asymptotically N(0, I_d)."""
    diff = np.asarray(theta_hat, dtype=np.float64) - np.asarray(theta_star, dtype=np.float64)
    return _inverse_sqrt(covariance.cov) @ diff


def run_inference(
    estimate: EstimateResult,
    x: SeriesLike,
    level: float = 0.95,
    rescale: bool = False,
) -> InferenceReport:
    """Gamma hats, sigma_xi2 hat, sandwich covariance and intervals for a previous fit.

    Args:
        estimate: The fit to assess, carrying theta_hat, the model and trunc_K
        x: The series the fit was computed on
        level: Two-sided confidence level of the intervals
        rescale: Also report theta_hat in the ||xi||_2 = 1 parametrisation

    Returns:
        An InferenceReport with the covariance, standard errors and intervals
    """
    settings = get_settings()
    spec = estimate.model
    arr = as_series(x)
    n = arr.shape[0]
    if n != estimate.n:
        logger.warning(f"series length {n} differs from the fitted length {estimate.n}")
    gamma1, gamma2 = gamma_hats(spec, estimate.theta_hat, arr, estimate.trunc_K)
    sigma2, hits = sigma_xi_hat_with_hits(
        spec, estimate.theta_hat, arr, estimate.trunc_K, settings.SIGMA_GUARD
    )
    covariance = asymptotic_cov(gamma1, gamma2, sigma2, n, settings.COND_LIMIT)
    intervals = confidence_intervals(
        estimate.theta_hat, covariance.cov, level, coordinate_names(spec)
    )
    theta_l2 = None
    if rescale:
        l2_norm = float(np.sqrt(sigma2))
        theta_l2 = rescale_to_l2(estimate.theta_hat, l2_norm, default_mask(spec)).tolist()
    logger.info(
        f"Inference n={n}: sigma_xi2_hat={sigma2:.6g} "
        f"cond(Gamma1)={covariance.condition_number:.3g}"
    )
    return InferenceReport(
        schema_version=settings.SCHEMA_VERSION,
        level=level,
        covariance=covariance,
        intervals=intervals,
        guard_hits=hits,
        theta_l2=theta_l2,
    )
