"""Service for the truncated volatility predictor, the three contrasts and the fit driver."""

import logging
from collections.abc import Callable

import numpy as np
import numpy.typing as npt
from scipy.optimize import Bounds, minimize
from scipy.signal import convolve
from scipy.stats import qmc

from larchfit.config import get_settings
from larchfit.exceptions import ArgumentError, DegenerateInputError, DomainError
from larchfit.schemas.estimate import ContrastKind, ContrastMethod, EstimateResult, FitOptions
from larchfit.schemas.model import CoefficientTable, Family, ModelSpec
from larchfit.schemas.trajectory import Trajectory
from larchfit.services.model_service import (
    ThetaLike,
    default_box,
    expand_coefficients,
    in_theta2,
    validate_theta,
)

logger = logging.getLogger(__name__)

# relative distance to the lower intercept bound treated as "on the boundary"
BOUNDARY_RTOL = 1e-6

SeriesLike = Trajectory | npt.ArrayLike
Contrast = Callable[[npt.NDArray[np.float64]], float]


def as_series(x: SeriesLike) -> npt.NDArray[np.float64]:
    """Observed values as a 1-d float array."""
    arr = x.x if isinstance(x, Trajectory) else np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ArgumentError(f"expected a non-empty 1-d series, got shape {arr.shape}")
    return arr


def default_trunc_k(spec: ModelSpec, n: int, cap: int | None = None) -> int:
    """min(n - 1, cap), never below the family order."""
    if cap is None:
        cap = get_settings().FIT_TRUNC_CAP
    return max(spec.order, min(n - 1, cap))


def lag_filter(
    weights: npt.NDArray[np.float64], x: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    """y_t = sum_{j=1}^{len(weights)} weights[j-1] * x_{t-j} with zero pre-sample values."""
    n = x.shape[0]
    weights = np.trim_zeros(weights, "b")
    if weights.shape[0] == 0 or n == 1:
        return np.zeros(n)
    full = convolve(x[: n - 1], weights[: n - 1], method="auto")
    out = np.zeros(n)
    out[1:] = full[: n - 1]
    return out


def m_tilde_series(coeffs: CoefficientTable, x: SeriesLike) -> npt.NDArray[np.float64]:
    """M~_t for t = 1..n: a0 + sum_{j=1}^{min(t-1, K)} a_j X_{t-j}."""
    arr = as_series(x)
    return coeffs.intercept + lag_filter(coeffs.slopes, arr)


def m_tilde(coeffs: CoefficientTable, x: SeriesLike, t: int) -> float:
    """M~ at a single time index t in 1..n."""
    arr = as_series(x)
    n = arr.shape[0]
    if not 1 <= t <= n:
        raise ArgumentError(f"t must lie in [1, {n}], got {t}")
    J = min(t - 1, coeffs.K)
    past = arr[t - 1 - J : t - 1][::-1]
    return coeffs.intercept + float(coeffs.slopes[:J] @ past)


def _predictor(
    spec: ModelSpec, theta: ThetaLike, x: npt.NDArray[np.float64], trunc_K: int | None
) -> npt.NDArray[np.float64]:
    K = trunc_K if trunc_K is not None else default_trunc_k(spec, x.shape[0])
    return m_tilde_series(expand_coefficients(spec, theta, K), x)


def lav_contrast(
    spec: ModelSpec, theta: ThetaLike, x: SeriesLike, trunc_K: int | None = None
) -> float:
    """(1/n) sum_t (|X_t| - |M~_t|)^2."""
    arr = as_series(x)
    m = _predictor(spec, theta, arr, trunc_K)
    return float(np.mean((np.abs(arr) - np.abs(m)) ** 2))


def sqml_contrast(
    spec: ModelSpec, theta: ThetaLike, x: SeriesLike, h: float, trunc_K: int | None = None
) -> float:
    """(1/n) sum_t (h + X_t^2) / (h + M~_t^2) + log(h + M~_t^2)."""
    if h <= 0:
        raise ArgumentError(f"h must be > 0, got {h}")
    arr = as_series(x)
    m = _predictor(spec, theta, arr, trunc_K)
    denom = h + m**2
    return float(np.mean((h + arr**2) / denom + np.log(denom)))


def weight_order(spec: ModelSpec) -> int | None:
    """Lag window of the weights: p for LarchP/Glarch, the whole past (None) for long memory."""
    if spec.family == Family.LONG_MEMORY:
        return None
    return spec.p_order


def compute_weights(x: SeriesLike, order: int | None) -> npt.NDArray[np.float64]:
    """tau_t = max(1, (1/C) sum_{i<=order} |X_{t-i}| 1{|X_{t-i}| > C})^-4.

    C is the order statistic of rank ceil(0.9 n) of |X|; order=None sums over the whole past.
    """
    if order is not None and order < 1:
        raise ArgumentError(f"order must be >= 1, got {order}")
    arr = np.abs(as_series(x))
    C = float(np.quantile(arr, 0.9, method="inverted_cdf"))
    if C == 0.0:
        raise DegenerateInputError("90% quantile of |X| is zero")
    exceed = np.where(arr > C, arr, 0.0)
    if order is None:
        lagged = np.concatenate(([0.0], np.cumsum(exceed)[:-1]))
    else:
        lagged = lag_filter(np.ones(order), exceed)
    return np.maximum(1.0, lagged / C) ** -4.0


def wls_contrast(
    spec: ModelSpec,
    theta: ThetaLike,
    x: SeriesLike,
    weights: npt.ArrayLike,
    trunc_K: int | None = None,
) -> float:
    """(1/n) sum_t tau_t (X_t^2 - M~_t^2)^2."""
    arr = as_series(x)
    tau = np.asarray(weights, dtype=np.float64)
    if tau.shape != arr.shape:
        raise ArgumentError(f"weights shape {tau.shape} does not match series shape {arr.shape}")
    if np.any(tau <= 0) or np.any(tau > 1):
        raise ArgumentError("weights must lie in (0, 1]")
    m = _predictor(spec, theta, arr, trunc_K)
    return float(np.mean(tau * (arr**2 - m**2) ** 2))


def normalized_square_ratio(
    m: npt.NDArray[np.float64], x: npt.NDArray[np.float64], eps_guard: float
) -> tuple[float, int]:
    """(1/n) sum X_t^2 / max(M~_t^2, eps_guard) and the number of guard activations."""
    m2 = m**2
    hits = int(np.count_nonzero(m2 < eps_guard))
    return float(np.mean(x**2 / np.maximum(m2, eps_guard))), hits


def contrast_decomposition(
    spec: ModelSpec,
    theta: ThetaLike,
    theta_star: ThetaLike,
    x: SeriesLike,
    trunc_K: int | None = None,
) -> tuple[float, float]:
    """(LAV contrast(theta) - contrast(theta_star), mean (|M~_theta| - |M~_theta_star|)^2).

    In the limit both agree, which makes theta_star the unique minimiser.
    """
    arr = as_series(x)
    gap = lav_contrast(spec, theta, arr, trunc_K) - lav_contrast(spec, theta_star, arr, trunc_K)
    m = _predictor(spec, theta, arr, trunc_K)
    m_star = _predictor(spec, theta_star, arr, trunc_K)
    return gap, float(np.mean((np.abs(m) - np.abs(m_star)) ** 2))


def make_contrast(
    spec: ModelSpec, x: npt.NDArray[np.float64], kind: ContrastKind, trunc_K: int
) -> Contrast:
    """Contrast of theta on fixed data; WLS weights are computed once."""
    match kind.method:
        case ContrastMethod.LAV:
            return lambda theta: lav_contrast(spec, theta, x, trunc_K)
        case ContrastMethod.SQML:
            h = float(kind.h or 0.0)
            return lambda theta: sqml_contrast(spec, theta, x, h, trunc_K)
        case ContrastMethod.WLS:
            weights = compute_weights(x, weight_order(spec))
            return lambda theta: wls_contrast(spec, theta, x, weights, trunc_K)


def _resolve_box(
    spec: ModelSpec, opts: FitOptions
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    box = opts.box if opts.box is not None else default_box(spec)
    if len(box) != spec.d:
        raise ArgumentError(f"box has {len(box)} coordinates, model has {spec.d}")
    lo = np.array([b[0] for b in box], dtype=np.float64)
    hi = np.array([b[1] for b in box], dtype=np.float64)
    for i, value in opts.fixed.items():
        if not 0 <= i < spec.d:
            raise ArgumentError(f"fixed coordinate {i} out of range")
        if i == 0 and value <= 0:
            raise ArgumentError("a fixed intercept must be > 0")
    return lo, hi


def fit(
    spec: ModelSpec,
    x: SeriesLike,
    kind: ContrastKind,
    opts: FitOptions | None = None,
    seed: int = 0,
) -> EstimateResult:
    """Best local minimiser over Latin-hypercube multi-starts of a bounded Nelder-Mead search.

    Ties between starts go to the lowest start index, so the result does not depend on
    evaluation order.

    Args:
        spec: Family and orders of the model to fit
        x: Observed series (array or Trajectory)
        kind: Contrast to minimise (LAV, SQML(h) or WLS)
        opts: Search box, starts, tolerances and pinned coordinates; settings fill the gaps
        seed: Seed of the Latin-hypercube start points

    Returns:
        An EstimateResult with theta_hat, the contrast value, convergence and Theta(2) diagnostics
    """
    arr = as_series(x)
    if not np.any(arr):
        raise DegenerateInputError("cannot fit an all-zero series")
    opts = opts or FitOptions()
    settings = get_settings()
    n = arr.shape[0]
    starts = opts.starts or settings.FIT_STARTS
    tol = opts.tol or settings.FIT_TOL
    max_iter = opts.max_iter or settings.FIT_MAX_ITER
    trunc_K = opts.trunc_K or default_trunc_k(spec, n, settings.FIT_TRUNC_CAP)
    if trunc_K < spec.order:
        raise ArgumentError(f"trunc_K={trunc_K} is below the family order {spec.order}")

    lo, hi = _resolve_box(spec, opts)
    free = [i for i in range(spec.d) if i not in opts.fixed]
    template = np.array([opts.fixed.get(i, 0.0) for i in range(spec.d)], dtype=np.float64)
    contrast = make_contrast(spec, arr, kind, trunc_K)

    def full_theta(z: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        theta = template.copy()
        theta[free] = z
        return theta

    def objective(z: npt.NDArray[np.float64]) -> float:
        try:
            return contrast(full_theta(z))
        except (DomainError, ArgumentError):
            return np.inf

    best_theta = template
    best_value = np.inf
    best_index = 0
    best_converged = False
    improved_any = False
    n_evals = 0

    if not free:
        # every coordinate pinned: nothing to search
        best_value = contrast(template)
        best_converged = improved_any = True
        n_evals = 1
    else:
        sampler = qmc.LatinHypercube(d=len(free), seed=np.random.default_rng(seed))
        points = qmc.scale(sampler.random(starts), lo[free], hi[free])
        bounds = Bounds(lo[free], hi[free])
        for index, z0 in enumerate(points):
            f0 = objective(z0)
            res = minimize(
                objective,
                z0,
                method="Nelder-Mead",
                bounds=bounds,
                options={"maxiter": max_iter, "xatol": tol, "fatol": tol},
            )
            n_evals += int(res.nfev) + 1
            simplex, values = res.final_simplex
            diameter = float(np.max(np.abs(simplex - simplex[0])))
            spread = float(np.max(np.abs(values - values[0])))
            scale = 1.0 + float(np.linalg.norm(res.x))
            converged = diameter < tol * scale or spread < tol
            improved = bool(res.fun < f0)
            improved_any = improved_any or improved
            logger.debug(
                f"start {index}: f0={f0:.6g} f={res.fun:.6g} nfev={res.nfev} "
                f"converged={converged} theta={full_theta(res.x).tolist()}"
            )
            if res.fun < best_value:
                best_value = float(res.fun)
                best_theta = full_theta(res.x)
                best_index = index
                best_converged = converged

    converged = best_converged and improved_any and bool(np.isfinite(best_value))
    if not converged:
        logger.warning(f"{kind.label} fit did not converge (best start {best_index})")
    if 0 not in opts.fixed and best_theta[0] <= lo[0] + BOUNDARY_RTOL * (hi[0] - lo[0]):
        logger.warning(
            f"{kind.label} fit: intercept {best_theta[0]:.6g} sits on its lower bound "
            f"{lo[0]:.6g}; likely a spurious minimum, consider more starts"
        )

    # advisory: second-order stationarity at the noise variance implied by theta_hat
    m = m_tilde_series(expand_coefficients(spec, best_theta, trunc_K), arr)
    sigma2_hat, _ = normalized_square_ratio(m, arr, settings.SIGMA_GUARD)
    try:
        ok, margin = in_theta2(spec, best_theta, sigma2_hat)
    except DomainError:
        ok, margin = False, float("inf")

    logger.info(
        f"{kind.label} fit n={n}: theta_hat={best_theta.tolist()} contrast={best_value:.6g} "
        f"converged={converged}"
    )
    return EstimateResult(
        model=spec,
        theta_hat=best_theta.tolist(),
        contrast=float(best_value),
        kind=kind,
        converged=converged,
        n_evals=n_evals,
        start_index=best_index,
        n=n,
        trunc_K=trunc_K,
        in_theta2=ok,
        theta2_margin=margin,
    )
