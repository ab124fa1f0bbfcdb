from __future__ import annotations

from collections.abc import Sequence

import pandas as pd
import pyarrow as pa

from plan_replay.models.metrics import METRICS_COLUMNS, MetricsRow
from plan_replay.storage.base import METRICS_SCHEMA, StorageBackend
from plan_replay.utils import get_logger

logger = get_logger(__name__)


class MetricsStorage:
    """
    Persiste linhas de métricas como CSV (pandas) e, opcionalmente, Parquet.

    Uso:
        storage = MetricsStorage(LocalBackend("results"))
        storage.save(rows, "theta2", parquet=True)
    """

    FLOAT_FORMAT = "%.6f"

    def __init__(self, backend: StorageBackend):
        self.backend = backend

    @staticmethod
    def to_table(rows: Sequence[MetricsRow]) -> pa.Table:
        return pa.Table.from_pylist([r.to_dict() for r in rows], schema=METRICS_SCHEMA)

    @classmethod
    def to_frame(cls, rows: Sequence[MetricsRow]) -> pd.DataFrame:
        if not rows:
            return pd.DataFrame(columns=list(METRICS_COLUMNS))
        return cls.to_table(rows).to_pandas()

    def write_frame(self, frame: pd.DataFrame, path: str) -> str:
        text = frame.to_csv(index=False, float_format=self.FLOAT_FORMAT)
        written = self.backend.write_text(path, text)
        uri = self.backend.get_uri(written)
        logger.info(f"✓ CSV salvo: {uri} ({len(frame)} linhas)")
        return written

    def save(
        self,
        rows: Sequence[MetricsRow],
        name: str,
        summary: pd.DataFrame | None = None,
        parquet: bool = False,
    ) -> dict[str, str]:
        """Escreve `<name>.csv`, `<name>-summary.csv` e `<name>.parquet`."""
        written = {"csv": self.write_frame(self.to_frame(rows), f"{name}.csv")}
        if summary is not None:
            written["summary"] = self.write_frame(summary, f"{name}-summary.csv")
        if parquet:
            written["parquet"] = self.backend.write_parquet(
                f"{name}.parquet", self.to_table(rows)
            )
            uri = self.backend.get_uri(written["parquet"])
            logger.info(f"✓ Parquet salvo: {uri}")
        return written

    @staticmethod
    def read_csv(path) -> list[MetricsRow]:
        frame = pd.read_csv(path)
        return [
            MetricsRow(**{col: record[col] for col in METRICS_COLUMNS})
            for record in frame.to_dict(orient="records")
        ]
