"""
Configuration settings for hcx
"""
from pydantic_settings import BaseSettings
from typing import Optional


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables
    """

    # Application settings
    APP_NAME: str = "hcx"
    DEBUG: bool = False

    # Logging settings
    LOG_LEVEL: str = "INFO"

    # Parallelism cap for the search harness (unset: min(4, cpu count))
    HCX_THREADS: Optional[int] = None

    # Trial ledger
    HCX_DATABASE_URL: str = "sqlite:///./hcx-search.db"

    # Search harness defaults
    HCX_SEARCH_TRIALS: int = 10000
    HCX_SEARCH_SEED: int = 42
    HCX_DESCENT_STEPS: int = 500
    HCX_CONDITION_CAP: float = 1000.0
    HCX_AXIOM_TOLERANCE: float = 1e-9
    HCX_ACCEPT_THRESHOLD: float = 1e-6

    # Float oracle for the reduced coefficient system
    HCX_ORACLE_STARTS: int = 100000
    HCX_ORACLE_STEPS: int = 200
    HCX_ORACLE_THRESHOLD: float = 1e-3

    # Factor count of the non-existence pipeline
    HCX_DEFAULT_FACTORS: int = 4

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "case_sensitive": True,
        "extra": "ignore"
    }


# Create global settings instance
settings = Settings()
