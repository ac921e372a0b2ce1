from pydantic_settings import BaseSettings
from typing import Optional


def debug_print(message: str, settings_obj=None):
    """Print debug messages if debug mode is enabled"""
    if settings_obj is None:
        # Import here to avoid circular dependency
        from config import settings as default_settings
        settings_obj = default_settings

    if settings_obj.debug:
        print(f"[DEBUG] {message}")


class Settings(BaseSettings):
    # Ring used when a command does not name one
    default_ring: str = "zmod:2"

    # Verification budgets
    seed: int = 0
    samples: int = 100000
    exhaustive_limit: int = 10_000_000  # configuration spaces up to this size are enumerated
    torsor_sample_limit: int = 200_000  # action-law checks beyond this are sampled
    sample_walk_factor: int = 20  # sampled sweeps give up after samples * factor walks

    # API Configuration
    api_host: str = "0.0.0.0"
    api_port: int = 8000
    api_title: Optional[str] = None

    # Debug Configuration
    debug: bool = False  # Set to True to enable debug logging

    class Config:
        env_file = ".env"
        env_prefix = "INCIDENCE_"
        case_sensitive = False


settings = Settings()
