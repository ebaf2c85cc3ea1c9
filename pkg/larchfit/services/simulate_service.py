"""Service for simulating LARCH(inf) trajectories and closed-form moment oracles."""

import logging

import numpy as np
import numpy.typing as npt

from larchfit.exceptions import ArgumentError, DomainError
from larchfit.schemas.model import Family, ModelDefinition, ModelSpec
from larchfit.schemas.noise import NoiseSpec
from larchfit.schemas.trajectory import SimConfig, Trajectory, TrajectoryMeta
from larchfit.services.model_service import (
    ThetaLike,
    expand_coefficients,
    in_theta2,
    slope_power_sums,
    validate_theta,
)
from larchfit.services.noise_service import SeedLike, draw_noise, noise_stream, noise_variance

logger = logging.getLogger(__name__)


def _iterate_linear(
    a0: float, slopes: npt.NDArray[np.float64], xi: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    """X_t = xi_t (a0 + sum_j slopes[j-1] X_{t-j}), zero pre-sample lags."""
    J = slopes.shape[0]
    total = xi.shape[0]
    # history[J + t] holds X_t; the first J entries are the zero lags
    history = np.zeros(J + total)
    reversed_slopes = slopes[::-1].copy()
    for t in range(total):
        sigma = a0 + float(reversed_slopes @ history[t : t + J]) if J else a0
        history[J + t] = xi[t] * sigma
    return history[J:]


def _iterate_glarch(
    spec: ModelSpec, arr: npt.NDArray[np.float64], xi: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    """Joint (X_t, sigma_t) recursion, zero pre-sample lags for both."""
    p, q = spec.p_order, spec.q_order
    c0 = float(arr[0])
    c_rev = arr[1 : p + 1][::-1].copy()
    d_rev = arr[p + 1 :][::-1].copy()
    total = xi.shape[0]
    x_hist = np.zeros(p + total)
    s_hist = np.zeros(q + total)
    for t in range(total):
        sigma = c0 + float(c_rev @ x_hist[t : t + p]) + float(d_rev @ s_hist[t : t + q])
        s_hist[q + t] = sigma
        x_hist[p + t] = xi[t] * sigma
    return x_hist[p:]


def simulate(
    model: ModelDefinition,
    noise: NoiseSpec,
    n: int,
    cfg: SimConfig | None = None,
    seed: SeedLike = 0,
) -> Trajectory:
    """Simulate X_1..X_n after discarding cfg.burn_in values.

    LarchP iterates its finite recursion, Glarch iterates the (X, sigma) recursion and the
    long-memory family truncates the infinite sum at cfg.trunc_K.

    Args:
        model: Family, orders and theta of the process
        noise: Innovation law, normalised to E|xi| = 1
        n: Number of values kept after burn-in
        cfg: Burn-in and truncation order; defaults from SimConfig
        seed: Integer seed or tuple key of the Philox stream

    Returns:
        A Trajectory holding X_1..X_n and the metadata needed to reproduce it
    """
    if n < 1:
        raise ArgumentError(f"n must be >= 1, got {n}")
    cfg = cfg or SimConfig()
    spec = model.spec
    arr = validate_theta(spec, model.params)
    if cfg.trunc_K < spec.order:
        raise ArgumentError(f"trunc_K={cfg.trunc_K} is below the family order {spec.order}")

    ok, margin = in_theta2(spec, arr, noise_variance(noise))
    if not ok:
        logger.warning(
            f"theta={arr.tolist()} is outside Theta(2) (margin {margin:.4f}); simulating anyway"
        )

    xi = draw_noise(noise, noise_stream(seed), cfg.burn_in + n)
    match spec.family:
        case Family.LARCH:
            path = _iterate_linear(float(arr[0]), arr[1:], xi)
        case Family.GLARCH:
            path = _iterate_glarch(spec, arr, xi)
        case Family.LONG_MEMORY:
            table = expand_coefficients(spec, arr, cfg.trunc_K)
            path = _iterate_linear(table.intercept, table.slopes, xi)

    seed_list = [seed] if isinstance(seed, int) else list(seed)
    logger.info(f"Simulated {spec.family} trajectory n={n} burn_in={cfg.burn_in} seed={seed_list}")
    meta = TrajectoryMeta(
        seed=seed_list,
        burn_in=cfg.burn_in,
        trunc_K=cfg.trunc_K,
        model=model,
        noise=noise,
    )
    return Trajectory(x=path[cfg.burn_in :].copy(), meta=meta)


def theoretical_sigma2(spec: ModelSpec, theta: ThetaLike, sigma_xi2: float) -> float:
    """E[X^2] = a0^2 sigma_xi2 / (1 - sigma_xi2 sum_{k>=1} a_k^2)."""
    arr = validate_theta(spec, theta)
    s2, _ = slope_power_sums(spec, arr)
    denominator = 1.0 - sigma_xi2 * s2
    if denominator <= 0:
        raise DomainError(f"E[X^2] is infinite: 1 - sigma_xi2 * sum a_k^2 = {denominator:.4f}")
    a0 = expand_coefficients(spec, arr, spec.order).intercept
    return a0**2 * sigma_xi2 / denominator


def larch1_fourth_moment(theta: ThetaLike, sigma_xi2: float, mu4: float) -> float:
    """E[X^4] of a LARCH(1) process with theta = (a0, a1)."""
    a0, a1 = validate_theta(ModelSpec.larch(1), theta)
    second = 1.0 - sigma_xi2 * a1**2
    fourth = 1.0 - mu4 * a1**4
    if second <= 0 or fourth <= 0:
        raise DomainError(
            f"E[X^4] is infinite for a1={a1} (denominators {second:.4f}, {fourth:.4f})"
        )
    return float(a0**4 * mu4 * (1.0 + 5.0 * sigma_xi2 * a1**2) / (second * fourth))
