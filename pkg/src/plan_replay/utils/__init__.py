"""Utilitários de logging e configuração."""

from .logging import get_logger, run_log_path, setup_logging
from .settings import PlannerSettings, get_settings

__all__ = [
    "setup_logging",
    "get_logger",
    "run_log_path",
    "PlannerSettings",
    "get_settings",
]
