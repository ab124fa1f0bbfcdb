"""Configuração centralizada de logging."""

import logging
import logging.config
from datetime import datetime
from pathlib import Path
from typing import Any

LOGGER_NAMESPACE = "plan_replay"

FILE_FORMAT = (
    "%(asctime)s - %(name)s - %(levelname)s - %(message)s [%(filename)s:%(lineno)d]"
)


def run_log_path(
    log_dir: str | Path, run_name: str, started: datetime | None = None
) -> Path:
    """Arquivo de log de uma execução: `<nome>-<AAAAMMDD-HHMMSS>.log`."""
    stamp = (started or datetime.now()).strftime("%Y%m%d-%H%M%S")
    slug = run_name.strip().lower().replace(" ", "-") or "run"
    return Path(log_dir) / f"{slug}-{stamp}.log"


def setup_logging(
    level: str = "INFO",
    log_file: str | Path | None = None,
    log_dir: str | Path | None = None,
    run_name: str | None = None,
) -> Path | None:
    """
    Configura o logging do planejador.

    Console via rich. Em arquivo quando `log_file` é informado (com rotação) ou,
    sem ele, quando há `log_dir` e `run_name`: cada execução nomeada ganha o
    próprio arquivo em `log_dir`.

    Args:
        level: Nível de log (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Arquivo fixo de log
        log_dir: Diretório dos logs por execução
        run_name: Nome da execução, em geral o do experimento

    Returns:
        Caminho do arquivo de log, ou None se só há console
    """
    config: dict[str, Any] = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "standard": {
                "format": FILE_FORMAT,
                "datefmt": "%Y-%m-%d %H:%M:%S",
            },
        },
        "handlers": {
            "console": {
                "()": "rich.logging.RichHandler",
                "level": level,
                "markup": False,
                "rich_tracebacks": True,
                "show_time": True,
                "show_path": False,
                "log_time_format": "%H:%M:%S",
            },
        },
        "loggers": {
            LOGGER_NAMESPACE: {
                "handlers": ["console"],
                "level": level,
                "propagate": False,
            },
        },
        "root": {
            "handlers": ["console"],
            "level": "WARNING",
        },
    }

    log_path: Path | None = None
    if log_file:
        log_path = Path(log_file)
        config["handlers"]["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "maxBytes": 10_485_760,  # 10MB
            "backupCount": 5,
        }
    elif log_dir and run_name:
        log_path = run_log_path(log_dir, run_name)
        config["handlers"]["file"] = {"class": "logging.FileHandler"}

    if log_path is not None:
        log_path.parent.mkdir(parents=True, exist_ok=True)
        config["handlers"]["file"].update(
            level=level,
            formatter="standard",
            filename=str(log_path),
            encoding="utf-8",
        )
        config["loggers"][LOGGER_NAMESPACE]["handlers"].append("file")

    logging.config.dictConfig(config)

    logger = logging.getLogger(LOGGER_NAMESPACE)
    logger.debug(f"Logging configurado (level: {level}, arquivo: {log_path})")
    return log_path


def get_logger(name: str) -> logging.Logger:
    """
    Retorna logger com nome qualificado.

    Args:
        name: Nome do logger (geralmente __name__)
    """
    return logging.getLogger(name)
