"""Linha de métricas do harness de experimentos."""

from __future__ import annotations

from dataclasses import asdict, dataclass

METRICS_COLUMNS = (
    "phase",
    "mode",
    "problem_id",
    "solved",
    "solution_length",
    "nodes_visited",
    "wall_time",
    "retrieval_time",
    "seq",
    "der",
    "rep",
    "library_size",
)
TIME_COLUMNS = ("wall_time", "retrieval_time")


@dataclass(frozen=True)
class MetricsRow:
    """Um problema resolvido em um modo. Tempos em segundos."""

    phase: int
    mode: str
    problem_id: str
    solved: bool
    solution_length: int
    nodes_visited: int
    wall_time: float
    retrieval_time: float
    seq: bool
    der: float
    rep: float
    library_size: int

    def to_dict(self) -> dict:
        return asdict(self)

    def __repr__(self) -> str:
        mark = "✓" if self.solved else "❌"
        return (
            f"<MetricsRow {mark} phase={self.phase} mode={self.mode} "
            f"{self.problem_id} nodes={self.nodes_visited}>"
        )
