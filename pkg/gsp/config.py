"""Toolchain configuration management."""

from functools import lru_cache
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolchain settings loaded from environment variables."""

    # Execution
    step_budget: int = 1_000_000
    max_call_depth: int = 2_000

    # Fuzzing
    fuzz_step_budget: int = 20_000
    fuzz_workers: int = 4
    fuzz_max_top_stmts: int = 10
    fuzz_max_expr_depth: int = 3
    fuzz_max_classes: int = 3

    # Regression corpus
    corpus_dir: str = "corpus"

    # App Settings
    debug: bool = False
    environment: str = "development"
    log_level: str = "WARNING"

    model_config = SettingsConfigDict(
        env_prefix="GSP_",
        env_file=".env",
        env_file_encoding="utf-8"
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
