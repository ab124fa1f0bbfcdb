import logging
import os
import tempfile
from pathlib import Path
from typing import Any

import pyarrow as pa
import pyarrow.parquet as pq
from tenacity import (
    before_sleep_log,
    retry,
    retry_if_exception_type,
    stop_after_attempt,
    wait_exponential,
)

from plan_replay.storage.base import (
    PARQUET_COMPRESSION,
    PARQUET_COMPRESSION_LEVEL,
    StorageBackend,
)
from plan_replay.utils import get_logger

logger = get_logger(__name__)


class LocalBackend(StorageBackend):
    """Backend em filesystem local; escritas por arquivo temporário + rename."""

    def __init__(self, base_path: Path | str = "library"):
        self.base_path = Path(base_path)
        self.base_path.mkdir(parents=True, exist_ok=True)
        logger.debug(f"LocalBackend inicializado em {self.base_path}")

    @retry(
        retry=retry_if_exception_type(OSError),
        stop=stop_after_attempt(3),
        wait=wait_exponential(multiplier=0.1, min=0.1, max=1),
        before_sleep=before_sleep_log(logger, logging.WARNING),
        reraise=True,
    )
    def write_bytes(self, path: str, data: bytes) -> str:
        full_path = self.base_path / path
        full_path.parent.mkdir(parents=True, exist_ok=True)

        fd, tmp_name = tempfile.mkstemp(dir=full_path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp_name, full_path)
        except BaseException:
            Path(tmp_name).unlink(missing_ok=True)
            raise

        return str(full_path.relative_to(self.base_path))

    def read_bytes(self, path: str) -> bytes:
        return (self.base_path / path).read_bytes()

    def exists(self, path: str) -> bool:
        return (self.base_path / path).exists()

    def write_parquet(self, path: str, table: pa.Table, **kwargs: Any) -> str:
        full_path = self.base_path / path
        full_path.parent.mkdir(parents=True, exist_ok=True)

        pq.write_table(
            table,
            str(full_path),
            compression=kwargs.get("compression", PARQUET_COMPRESSION),
            compression_level=kwargs.get(
                "compression_level", PARQUET_COMPRESSION_LEVEL
            ),
            use_dictionary=kwargs.get("use_dictionary", True),
        )
        return str(full_path.relative_to(self.base_path))

    def get_uri(self, path: str) -> str:
        return f"file://{self.base_path / path}"
