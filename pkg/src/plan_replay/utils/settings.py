"""Configuração de execução lida do ambiente (prefixo PLAN_REPLAY_)."""

from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from plan_replay.models.search import DEFAULT_NODE_BUDGET, SearchStrategy


class PlannerSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="PLAN_REPLAY_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    node_budget: int = Field(default=DEFAULT_NODE_BUDGET, ge=1)
    time_budget: float | None = Field(default=None, gt=0)
    strategy: SearchStrategy = SearchStrategy.BEST_FIRST
    repair_depth_limit: int = Field(default=4, ge=0)
    library_dir: Path = Path("library")
    log_level: str = "INFO"
    log_file: Path | None = None
    log_dir: Path | None = None
    check_systematicity: bool = False


@lru_cache
def get_settings() -> PlannerSettings:
    return PlannerSettings()
