from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any

import pyarrow as pa

from plan_replay.utils import get_logger

logger = get_logger(__name__)


# ============================================================================
# Configurações e Constantes
# ============================================================================


PARQUET_COMPRESSION = "zstd"
PARQUET_COMPRESSION_LEVEL = 9

# Colunas fixas do CSV/Parquet de métricas; tempos em segundos
METRICS_SCHEMA = pa.schema(
    [
        ("phase", pa.int32()),
        ("mode", pa.string()),
        ("problem_id", pa.string()),
        ("solved", pa.bool_()),
        ("solution_length", pa.int32()),
        ("nodes_visited", pa.int64()),
        ("wall_time", pa.float64()),
        ("retrieval_time", pa.float64()),
        ("seq", pa.bool_()),
        ("der", pa.float64()),
        ("rep", pa.float64()),
        ("library_size", pa.int32()),
    ]
)


# ============================================================================
# Interfaces e Classes Base
# ============================================================================


class StorageBackend(ABC):
    """Interface abstrata para backends de armazenamento."""

    @abstractmethod
    def write_bytes(self, path: str, data: bytes) -> str:
        """Escreve bytes de forma atômica e retorna o path relativo."""
        pass

    @abstractmethod
    def read_bytes(self, path: str) -> bytes:
        """Lê bytes de um path."""
        pass

    @abstractmethod
    def exists(self, path: str) -> bool:
        """Verifica se path existe."""
        pass

    @abstractmethod
    def write_parquet(self, path: str, table: pa.Table, **kwargs: Any) -> str:
        """Escreve tabela Parquet."""
        pass

    @abstractmethod
    def get_uri(self, path: str) -> str:
        """Retorna URI completo para o path."""
        pass

    def write_text(self, path: str, text: str) -> str:
        return self.write_bytes(path, text.encode("utf-8"))

    def read_text(self, path: str) -> str:
        return self.read_bytes(path).decode("utf-8")
