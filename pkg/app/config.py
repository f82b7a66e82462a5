import logging
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """
    Budgets and defaults for the weight library and the sweep harness.
    Every key can be overridden with an SW_-prefixed environment variable.
    """

    model_config = SettingsConfigDict(env_prefix="SW_", env_file=".env", extra="ignore")

    enumeration_budget: int = Field(default=20000, gt=0)
    sset_budget: int = Field(default=4096, gt=0)
    congruence_budget: int = Field(default=20000, gt=0)
    exhaustive_class_limit: int = Field(default=12, ge=0)
    class_samples: int = Field(default=200, ge=0)
    random_seed: int = 0
    default_jobs: int = Field(default=1, ge=1)
    orbit_check_max_q: int = Field(default=124, ge=0)
    log_level: str = "WARNING"


@lru_cache
def get_settings() -> Settings:
    return Settings()


def configure_logging(level: str = None) -> None:
    """Set up root logging once, from the settings unless a level is given"""
    logging.basicConfig(
        level=(level or get_settings().log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
