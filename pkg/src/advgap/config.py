"""Application configuration via environment variables."""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Central configuration for advgap runs.

    Every field can be set through an ``ADVGAP_``-prefixed environment variable
    (``ADVGAP_THREADS=4``) or a ``.env`` file; CLI flags override per run.
    """

    model_config = SettingsConfigDict(
        env_prefix="ADVGAP_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    tol: float = Field(default=1e-9, gt=0)
    node_budget: int = Field(default=1_000_000, ge=1)
    hole_cap: int = Field(default=13, ge=5)
    exhaustive: bool = False
    clique_cap: int = Field(default=1_000_000, ge=1)
    fibration_max_vertices: int = Field(default=10_000, ge=1)
    geometry_max_iter: int = Field(default=500, ge=1)
    default_epsilon: str = "1/2"
    threads: int = Field(default=1, ge=1)
    log_level: str = "WARNING"


@lru_cache
def get_settings() -> Settings:
    return Settings()
