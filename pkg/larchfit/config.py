"""Application configuration from environment."""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from env vars and .env file."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # App
    APP_ENV: str = "development"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"
    SCHEMA_VERSION: int = 1

    # Seed fallback when a command or request carries none
    LARCH_SEED: int | None = None

    # Simulation
    BURN_IN: int = 2000
    SIM_TRUNC_K: int = 2000

    # Estimation
    FIT_STARTS: int = 8
    FIT_TOL: float = 1e-10
    FIT_MAX_ITER: int = 2000
    # Upper bound on the M-tilde truncation order (default is n - 1)
    FIT_TRUNC_CAP: int = 5000

    # Inference
    SIGMA_GUARD: float = 1e-8
    COND_LIMIT: float = 1e12

    # Monte-Carlo
    MC_WORKERS: int = 1

    def resolve_seed(self, seed: int | None) -> int:
        """Explicit seed, else LARCH_SEED, else 0."""
        if seed is not None:
            return seed
        if self.LARCH_SEED is not None:
            return self.LARCH_SEED
        return 0


def get_settings() -> Settings:
    """Return settings loaded from environment (no cache, no globals)."""
    return Settings()
