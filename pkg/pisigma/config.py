from pydantic_settings import BaseSettings
from functools import lru_cache
from typing import Optional


class Settings(BaseSettings):
    """Engine configuration"""

    log_level: str = "INFO"
    log_file: Optional[str] = "logs/pisigma.log"

    # Recurrence search
    d_max: int = 5
    recurrence_check_window: int = 15
    certificate_window: int = 20

    # Verification
    verify_window: int = 20
    germ_samples: int = 8
    cross_validation_points: int = 5

    # Difference field construction
    pi_check_max_power: int = 6
    max_candidate_atoms: int = 24
    atomic_reduction: bool = True

    class Config:
        env_file = ".env"
        env_prefix = "PISIGMA_"
        case_sensitive = False


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
