"""Service for innovation laws normalised to E|xi| = 1: moments and seeded streams."""

import logging
import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
from scipy.special import gammaln

from larchfit.exceptions import ArgumentError
from larchfit.schemas.noise import NoiseKind, NoiseMoments, NoiseSpec

logger = logging.getLogger(__name__)

SeedLike = int | Sequence[int]


def student_abs_mean(nu: float) -> float:
    """E|T_nu| for a standard Student t with nu > 1 degrees of freedom."""
    if nu <= 1:
        raise ArgumentError(f"E|T| is infinite for nu={nu}")
    log_ratio = gammaln((nu + 1.0) / 2.0) - gammaln(nu / 2.0)
    return 2.0 * math.sqrt(nu) * math.exp(log_ratio) / (math.sqrt(math.pi) * (nu - 1.0))


def noise_scale(spec: NoiseSpec) -> float:
    """Factor that takes the standard law to E|xi| = 1."""
    if spec.noise == NoiseKind.GAUSSIAN:
        return math.sqrt(math.pi / 2.0)
    nu = spec.nu
    if nu is None or nu <= 2:
        raise ArgumentError(f"student noise needs nu > 2 for a finite variance, got {nu}")
    return 1.0 / student_abs_mean(nu)


def noise_variance(spec: NoiseSpec) -> float:
    """sigma_xi^2 = E[xi^2] under E|xi| = 1."""
    if spec.noise == NoiseKind.GAUSSIAN:
        return math.pi / 2.0
    scale = noise_scale(spec)
    nu = float(spec.nu or 0)
    return scale**2 * nu / (nu - 2.0)


def noise_moments(spec: NoiseSpec) -> NoiseMoments:
    """Closed-form (E|xi|, E[xi^2], E[xi^4]) after rescaling to E|xi| = 1."""
    if spec.noise == NoiseKind.GAUSSIAN:
        half_pi = math.pi / 2.0
        return NoiseMoments(
            l1=1.0,
            scale=math.sqrt(half_pi),
            sigma_xi2=half_pi,
            mu4=3.0 * half_pi**2,
            mu4_finite=True,
        )
    scale = noise_scale(spec)
    sigma_xi2 = noise_variance(spec)
    nu = float(spec.nu or 0)
    if nu > 4:
        mu4 = scale**4 * 3.0 * nu**2 / ((nu - 2.0) * (nu - 4.0))
        return NoiseMoments(l1=1.0, scale=scale, sigma_xi2=sigma_xi2, mu4=mu4, mu4_finite=True)
    logger.warning(f"student({spec.nu}) noise has no finite fourth moment")
    return NoiseMoments(l1=1.0, scale=scale, sigma_xi2=sigma_xi2, mu4=math.inf, mu4_finite=False)


def noise_stream(seed: SeedLike) -> np.random.Generator:
    """Counter-based Philox stream keyed by a seed or a tuple such as (master_seed, r)."""
    entropy = [seed] if isinstance(seed, int) else list(seed)
    if any(s < 0 for s in entropy):
        raise ArgumentError(f"seeds must be non-negative, got {entropy}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def draw_noise(spec: NoiseSpec, rng: np.random.Generator, n: int) -> npt.NDArray[np.float64]:
    """n i.i.d. draws from an existing stream."""
    if n < 1:
        raise ArgumentError(f"n must be >= 1, got {n}")
    scale = noise_scale(spec)
    if spec.noise == NoiseKind.GAUSSIAN:
        return scale * rng.standard_normal(n)
    return scale * rng.standard_t(spec.nu, size=n)


def sample_noise(spec: NoiseSpec, seed: SeedLike, n: int) -> npt.NDArray[np.float64]:
    """n i.i.d. draws, identical for identical (spec, seed, n)."""
    return draw_noise(spec, noise_stream(seed), n)
