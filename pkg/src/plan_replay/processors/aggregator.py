"""Agregação por (fase, modo) das linhas de métricas."""

from collections.abc import Sequence

import pandas as pd

from ..models import MetricsRow
from ..storage.metrics import MetricsStorage
from ..utils import get_logger

logger = get_logger(__name__)

SUMMARY_COLUMNS = [
    "phase",
    "mode",
    "problems",
    "pct_solved",
    "avg_length",
    "total_nodes",
    "total_time",
    "retrieval_time",
    "pct_seq",
    "pct_der",
    "pct_rep",
    "library_size",
]


class MetricsAggregator:
    """Resumo por fase no formato das tabelas de desempenho."""

    @staticmethod
    def summarize(rows: Sequence[MetricsRow]) -> pd.DataFrame:
        """
        Agrega linhas por (fase, modo).

        Args:
            rows: Uma linha por (problema, modo)

        Returns:
            DataFrame com %Solved, comprimento médio das soluções, nós e tempos
            totais, %Seq/%Der/%Rep e o tamanho final da biblioteca
        """
        frame = MetricsStorage.to_frame(rows)
        if frame.empty:
            return pd.DataFrame(columns=SUMMARY_COLUMNS)

        records = []
        for (phase, mode), group in frame.groupby(["phase", "mode"], sort=False):
            solved = group[group["solved"]]
            has_solved = len(solved) > 0
            records.append(
                {
                    "phase": int(phase),
                    "mode": mode,
                    "problems": len(group),
                    "pct_solved": 100.0 * group["solved"].mean(),
                    "avg_length": (
                        float(solved["solution_length"].mean()) if has_solved else 0.0
                    ),
                    "total_nodes": int(group["nodes_visited"].sum()),
                    "total_time": float(group["wall_time"].sum()),
                    "retrieval_time": float(group["retrieval_time"].sum()),
                    "pct_seq": 100.0 * group["seq"].mean(),
                    "pct_der": 100.0 * solved["der"].mean() if has_solved else 0.0,
                    "pct_rep": 100.0 * solved["rep"].mean() if has_solved else 0.0,
                    "library_size": int(group["library_size"].iloc[-1]),
                }
            )
        # grupos na ordem em que aparecem nas linhas
        summary = pd.DataFrame.from_records(records, columns=SUMMARY_COLUMNS)
        logger.debug(f"Resumo com {len(summary)} linhas (fase, modo)")
        return summary
