"""Tipos do replay: log, desfechos de adaptação e métricas."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .explanation import CaseFailureReason
from .search import SearchStats, Solution


class ReplayMode(str, Enum):
    SCRATCH = "scratch"
    STATIC = "static"
    LEARNING = "learning"
    LEARNING_NOJUST = "learning-nojust"

    @property
    def uses_library(self) -> bool:
        return self is not ReplayMode.SCRATCH

    @property
    def censors(self) -> bool:
        return self in (ReplayMode.LEARNING, ReplayMode.LEARNING_NOJUST)

    @property
    def increased_justification(self) -> bool:
        return self is not ReplayMode.LEARNING_NOJUST


class SkipReason(str, Enum):
    INVALID_PRECONDITION = "invalid-precondition"
    INCREASED_JUSTIFICATION = "increased-justification"


@dataclass(frozen=True)
class Replayed:
    case_index: int
    record: str
    node_serial: int


@dataclass(frozen=True)
class Skipped:
    case_index: int
    record: str
    reason: SkipReason


ReplayEntry = Union[Replayed, Skipped]


@dataclass
class ReplayLog:
    entries: list[ReplayEntry] = field(default_factory=list)

    @property
    def replayed(self) -> list[Replayed]:
        return [e for e in self.entries if isinstance(e, Replayed)]

    @property
    def skipped(self) -> list[Skipped]:
        return [e for e in self.entries if isinstance(e, Skipped)]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ReplayMetrics:
    """seq: episódio sequenciado; der/rep: frações de refinamentos do replay."""

    seq: bool
    der: float
    rep: float

    def __post_init__(self) -> None:
        for name in ("der", "rep"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} fora de [0, 1]: {value}")


@dataclass(frozen=True)
class Sequenced:
    solution: Solution
    stats: SearchStats = field(compare=False)


@dataclass(frozen=True)
class Recovered:
    solution: Solution
    failure_reason: CaseFailureReason | None
    stats: SearchStats = field(compare=False)


@dataclass(frozen=True)
class Failed:
    failure_reason: CaseFailureReason | None
    stats: SearchStats = field(compare=False)
    budget_exceeded: bool = False


AdaptOutcome = Union[Sequenced, Recovered, Failed]
