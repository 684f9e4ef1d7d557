from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Precision
    # Ceiling for precision escalation of N (p-adic digits)
    SYNTOMIC_PRECISION_CEILING: int = 40
    SYNTOMIC_PRECISION_STEP: int = 2

    # Weight window
    SYNTOMIC_MAX_WEIGHT: int = 200000

    # Parallelism (per tower, opt-in)
    SYNTOMIC_JOBS: int = 1

    # Verification suite
    VERIFY_WITT_SAMPLES: int = 1000
    VERIFY_SEED: int = 0

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()


def auto_precision(p: int, e: int, i: int) -> int:
    """
    Initial precision N0 = ceil(log_p(e*i)) + 3
    The largest expected factor exponent is about log_p(2i - 1) + 1
    """
    target = max(e * i, 1)
    n, power = 0, 1
    while power < target:
        power *= p
        n += 1
    return n + 3


def auto_weight_window(p: int, e: int, i: int) -> int:
    """Default weight window Wmax = e * max(i, 1) * p^2"""
    return e * max(i, 1) * p * p
