"""Service for coefficient families: expansion a_k(theta), gradients and moment domains."""

import logging
import math

import numpy as np
import numpy.typing as npt
from scipy.signal import lfilter
from scipy.special import zeta

from larchfit.exceptions import ArgumentError, DomainError
from larchfit.schemas.model import CoefficientTable, Family, ModelSpec, ParamVector

logger = logging.getLogger(__name__)

# Glarch slope sums are truncated once rho**K drops below this
_GEOMETRIC_TAIL = 1e-18
_GLARCH_SUM_CAP = 100_000

ThetaLike = ParamVector | npt.ArrayLike


def coordinate_names(spec: ModelSpec) -> list[str]:
    """Human-readable names of the parameter coordinates, in order."""
    match spec.family:
        case Family.LARCH:
            return [f"a{i}" for i in range(spec.p_order + 1)]
        case Family.GLARCH:
            return [f"c{i}" for i in range(spec.p_order + 1)] + [
                f"d{j}" for j in range(1, spec.q_order + 1)
            ]
        case Family.LONG_MEMORY:
            return ["a0", "c", "d"]


def validate_theta(spec: ModelSpec, theta: ThetaLike) -> npt.NDArray[np.float64]:
    """Return theta as a float array after checking the family invariants.

    Raises:
        ArgumentError: wrong length or non-positive intercept.
        DomainError: d outside [0, 1/2) (long memory) or sum |d_j| >= 1 (Glarch).
    """
    values = theta.theta if isinstance(theta, ParamVector) else theta
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != spec.d:
        raise ArgumentError(f"theta must have length {spec.d} for {spec.family}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ArgumentError("theta must be finite")
    if arr[0] <= 0:
        raise ArgumentError(f"intercept must be > 0, got {arr[0]}")
    if spec.family == Family.LONG_MEMORY and not 0.0 <= arr[2] < 0.5:
        raise DomainError(f"memory parameter d must lie in [0, 1/2), got {arr[2]}")
    if spec.family == Family.GLARCH:
        d_coefs = arr[spec.p_order + 1 :]
        if math.isclose(float(d_coefs.sum()), 1.0):
            raise DomainError("sum of d_j equals 1: intercept a0 = c0 / (1 - sum d_j) is undefined")
        if float(np.abs(d_coefs).sum()) >= 1.0:
            raise DomainError(f"sum |d_j| = {np.abs(d_coefs).sum():.4f} must be < 1")
    return arr


def _check_order(spec: ModelSpec, K: int) -> None:
    if K < spec.order:
        raise ArgumentError(f"truncation K={K} is below the family order {spec.order}")


def _impulse(K: int) -> npt.NDArray[np.float64]:
    delta = np.zeros(K + 1)
    delta[0] = 1.0
    return delta


def _glarch_parts(
    spec: ModelSpec, arr: npt.NDArray[np.float64]
) -> tuple[float, npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """(c0, numerator [0, c_1..c_p], denominator [1, -d_1..-d_q])."""
    p = spec.p_order
    numerator = np.concatenate(([0.0], arr[1 : p + 1]))
    denominator = np.concatenate(([1.0], -arr[p + 1 :]))
    return float(arr[0]), numerator, denominator


def expand_coefficients(spec: ModelSpec, theta: ThetaLike, K: int) -> CoefficientTable:
    """Expand theta into the LARCH(inf) coefficients a_0..a_K.

    Glarch slopes are the power-series coefficients of
    (sum c_i x^i) / (1 - sum d_j x^j), obtained as the impulse response of that filter.
    """
    arr = validate_theta(spec, theta)
    _check_order(spec, K)
    a = np.zeros(K + 1)
    match spec.family:
        case Family.LARCH:
            a[: spec.p_order + 1] = arr
        case Family.GLARCH:
            c0, numerator, denominator = _glarch_parts(spec, arr)
            a[:] = lfilter(numerator, denominator, _impulse(K))
            a[0] = c0 / denominator.sum()
        case Family.LONG_MEMORY:
            a0, c, d = arr
            k = np.arange(1, K + 1, dtype=np.float64)
            a[0] = a0
            a[1:] = c * k ** (d - 1.0)
    return CoefficientTable(a=a, K=K)


def grad_coefficients(spec: ModelSpec, theta: ThetaLike, K: int) -> CoefficientTable:
    """Expansion plus analytic gradients: grads[i, k] = d a_k / d theta_i."""
    table = expand_coefficients(spec, theta, K)
    arr = validate_theta(spec, theta)
    grads = np.zeros((spec.d, K + 1))
    match spec.family:
        case Family.LARCH:
            p = spec.p_order
            grads[:, : p + 1] = np.eye(p + 1)
        case Family.GLARCH:
            p, q = spec.p_order, spec.q_order
            c0, _, denominator = _glarch_parts(spec, arr)
            one_minus = denominator.sum()
            series = table.a.copy()
            series[0] = 0.0
            grads[0, 0] = 1.0 / one_minus
            for i in range(1, p + 1):
                unit = np.zeros(i + 1)
                unit[i] = 1.0
                grads[i] = lfilter(unit, denominator, _impulse(K))
            # d a_k / d d_j = a_{k-j} + sum_m d_m d a_{k-m} / d d_j
            for j in range(1, q + 1):
                shift = np.zeros(j + 1)
                shift[j] = 1.0
                row = p + j
                grads[row] = lfilter(shift, denominator, series)
                grads[row, 0] = c0 / one_minus**2
        case Family.LONG_MEMORY:
            _, c, d = arr
            k = np.arange(1, K + 1, dtype=np.float64)
            power = k ** (d - 1.0)
            grads[0, 0] = 1.0
            grads[1, 1:] = power
            grads[2, 1:] = c * np.log(k) * power
    return CoefficientTable(a=table.a, K=K, grads=grads)


def glarch_sum_order(spec: ModelSpec, theta: ThetaLike) -> int:
    """Truncation at which the geometric Glarch tail falls below machine resolution."""
    arr = validate_theta(spec, theta)
    rho = float(np.abs(arr[spec.p_order + 1 :]).sum())
    if rho == 0.0:
        return spec.order
    needed = math.ceil(math.log(_GEOMETRIC_TAIL) / math.log(rho)) + spec.order
    return min(max(needed, spec.order), _GLARCH_SUM_CAP)


def power_law_partial_sum(
    c: float, d: float, power: int, J: int = 1_000_000
) -> tuple[float, float]:
    """Sum_{j<=J} |c j^(d-1)|^power and the integral bound on the remaining tail."""
    exponent = power * (d - 1.0)
    if exponent >= -1.0:
        raise DomainError(f"sum of |a_j|^{power} diverges for d={d}")
    j = np.arange(1, J + 1, dtype=np.float64)
    scale = abs(c) ** power
    partial = scale * float(np.sum(j**exponent))
    tail = scale * J ** (exponent + 1.0) / (-exponent - 1.0)
    return partial, tail


def slope_power_sums(spec: ModelSpec, theta: ThetaLike) -> tuple[float, float]:
    """(sum_{j>=1} a_j^2, sum_{j>=1} a_j^4) of the full infinite expansion."""
    arr = validate_theta(spec, theta)
    match spec.family:
        case Family.LARCH:
            slopes = arr[1:]
        case Family.GLARCH:
            slopes = expand_coefficients(spec, arr, glarch_sum_order(spec, arr)).slopes
        case Family.LONG_MEMORY:
            _, c, d = arr
            return float(c**2 * zeta(2.0 - 2.0 * d, 1.0)), float(c**4 * zeta(4.0 - 4.0 * d, 1.0))
    return float(np.sum(slopes**2)), float(np.sum(slopes**4))


def in_theta2(spec: ModelSpec, theta: ThetaLike, sigma_xi2: float) -> tuple[bool, float]:
    """Second-order stationarity: sigma_xi2 * sum a_j^2 < 1."""
    if sigma_xi2 <= 0:
        raise ArgumentError(f"sigma_xi2 must be > 0, got {sigma_xi2}")
    s2, _ = slope_power_sums(spec, theta)
    margin = sigma_xi2 * s2
    return margin < 1.0, margin


def in_theta4(
    spec: ModelSpec, theta: ThetaLike, sigma_xi2: float, mu4: float
) -> tuple[bool, float]:
    """Fourth-order condition: mu4 * sum a_j^4 + 6 sigma_xi2 * sum a_j^2 < 1."""
    if sigma_xi2 <= 0:
        raise ArgumentError(f"sigma_xi2 must be > 0, got {sigma_xi2}")
    if mu4 < sigma_xi2**2:
        raise ArgumentError(f"mu4={mu4} violates mu4 >= sigma_xi2^2")
    s2, s4 = slope_power_sums(spec, theta)
    fourth = mu4 * s4 if s4 > 0 else 0.0
    margin = fourth + 6.0 * sigma_xi2 * s2
    return margin < 1.0, margin


def in_theta_pq2(spec: ModelSpec, theta: ThetaLike, l2_norm: float) -> tuple[bool, float]:
    """Glarch display: sum d_i^2 + ||xi||_2 * sum c_j^2 < 1, with the norm unsquared as printed."""
    if spec.family != Family.GLARCH:
        raise ArgumentError("in_theta_pq2 applies to glarch models only")
    arr = validate_theta(spec, theta)
    p = spec.p_order
    margin = float(np.sum(arr[p + 1 :] ** 2) + l2_norm * np.sum(arr[1 : p + 1] ** 2))
    return margin < 1.0, margin


def theta4_long_memory_bound(
    c_bar: float, d_bar: float, sigma_xi2: float, mu4: float
) -> tuple[bool, float]:
    """Sufficient fourth-order condition over a power-law box |c| <= c_bar, d <= d_bar."""
    if not 0 <= d_bar < 0.5:
        raise DomainError(f"d_bar must lie in [0, 1/2), got {d_bar}")
    margin = float(
        c_bar**4 * mu4 * zeta(4.0 - 4.0 * d_bar, 1.0)
        + 6.0 * c_bar**2 * sigma_xi2 * zeta(2.0 - 2.0 * d_bar, 1.0)
    )
    return margin < 1.0, margin


def default_box(spec: ModelSpec) -> list[tuple[float, float]]:
    """Compact search region used when the caller supplies none."""
    match spec.family:
        case Family.LARCH | Family.GLARCH:
            return [(0.01, 20.0)] + [(-0.95, 0.95)] * (spec.d - 1)
        case Family.LONG_MEMORY:
            return [(0.01, 20.0), (-2.0, 2.0), (0.0, 0.45)]
