"""
Configuration management for the digital net quality tool.
Uses pydantic-settings for environment variable management.
"""
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Tool settings loaded from environment variables (prefix DNQ_)."""

    model_config = SettingsConfigDict(
        env_prefix="DNQ_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    tool_name: str = "digital-net-quality"

    # Execution
    workers: int = 1  # default thread count, DNQ_WORKERS
    chunk_size: int = 4096  # points per enumeration block

    # Oracle resource bounds
    dual_enumeration_bound: int = 2**24  # candidate character matrices b^(ns)
    interval_check_bound: int = 2**20  # points x compositions
    walsh_check_bound: int = 2**20  # candidate characters x points

    # Generalized weight enumerator guards
    gw_dimension_cap: int = 12
    gw_term_bound: int = 2**20

    # Sobol' direction integers
    max_sobol_bits: int = 64

    # Output / logging
    output_format: str = "json"
    log_level: str = "INFO"


# Global settings instance
settings = Settings()
