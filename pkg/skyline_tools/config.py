import math
import os
from typing import Any, Optional

from loguru import logger
from pydantic import (
    BaseModel,
    Field,
    ValidationError,
    field_validator,
)

from skyline_tools.errors import ParameterError

ENV_PREFIX = "SKYLINE_"


class SkylineConfig(BaseModel):
    """Build and query settings shared by the library and the CLI"""

    delta: Optional[int] = Field(default=None)
    ball_b: int = Field(default=2)
    epsilon: float = Field(default=0.5)
    memo_cache: int = Field(default=0)
    strict: bool = Field(default=True)
    seed: int = Field(default=0)
    collect_stats: bool = Field(default=False)
    materialize_lists: bool = Field(default=False)
    workers: int = Field(default=1)
    log_level: str = Field(default="INFO")

    @field_validator("delta")
    @classmethod
    def validate_delta(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 2:
            raise ValueError(f"delta must be >= 2, got {v}")
        return v

    @field_validator("ball_b")
    @classmethod
    def validate_ball_b(cls, v: int) -> int:
        # 0 selects the lg^eps regime
        if v == 1 or v < 0:
            raise ValueError(
                f"ball_b must be 0 (auto) or >= 2, got {v}"
            )
        return v

    @field_validator("epsilon")
    @classmethod
    def validate_epsilon(cls, v: float) -> float:
        if not 0 < v <= 1:
            raise ValueError(
                f"epsilon must lie in (0, 1], got {v}"
            )
        return v

    @field_validator("memo_cache", "workers")
    @classmethod
    def validate_non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"expected a value >= 0, got {v}")
        return v

    def resolve_delta(self, n: int) -> int:
        if self.delta is not None:
            return self.delta
        return default_delta(n)

    def resolve_ball_b(self, n: int) -> int:
        if self.ball_b:
            return self.ball_b
        lg = math.log2(n) if n > 1 else 1.0
        return max(2, math.ceil(lg**self.epsilon))


def default_delta(n: int) -> int:
    """Degree max(2, ceil(lg(n) ** 1/4))."""
    if n <= 2:
        return 2
    return max(2, math.ceil(math.log2(n) ** 0.25))


def _env_value(name: str) -> Optional[str]:
    value = os.getenv(f"{ENV_PREFIX}{name.upper()}")
    if value is None or value.strip() == "":
        return None
    return value.strip()


def load_config(**overrides: Any) -> SkylineConfig:
    """
    Builds a SkylineConfig from SKYLINE_* environment variables, then
    applies explicit overrides (None values are ignored).

    Args:
        **overrides: Field values that take precedence over the
            environment, typically parsed CLI flags.

    Returns:
        SkylineConfig: The validated configuration.

    Raises:
        ParameterError: If any value fails validation.
    """
    values = {}
    for name in SkylineConfig.model_fields:
        raw = _env_value(name)
        if raw is not None:
            values[name] = raw
    values.update(
        {k: v for k, v in overrides.items() if v is not None}
    )
    try:
        config = SkylineConfig(**values)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        raise ParameterError(str(e)) from e
    logger.debug(f"Loaded configuration: {config.model_dump()}")
    return config
