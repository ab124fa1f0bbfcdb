"""Especificação de um experimento do harness."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

from .replay import ReplayMode
from .search import DEFAULT_NODE_BUDGET, SearchLimits, SearchStrategy

if TYPE_CHECKING:
    from plan_replay.domain_configs.base import BaseDomainConfig


class TrainingProtocol(str, Enum):
    """Como a biblioteca é (re)construída antes de cada fase."""

    FAILURE_DRIVEN = "failure-driven"
    INCREMENTAL = "incremental"
    MERGE = "merge"


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Fases, protocolo de treino e modos de um experimento.

    `phases` lista o número de metas dos problemas de teste de cada fase.
    `training_problems` vale `problems_per_phase` quando omitido.
    """

    name: str
    config: BaseDomainConfig
    protocol: TrainingProtocol
    phases: tuple[int, ...]
    problems_per_phase: int
    modes: tuple[ReplayMode, ...]
    training_problems: int | None = None
    strategy: SearchStrategy = SearchStrategy.BEST_FIRST
    node_budget: int = DEFAULT_NODE_BUDGET
    time_budget: float | None = None
    step_bound: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.phases:
            raise ValueError("Experimento sem fases")
        if any(n < 1 for n in self.phases):
            raise ValueError(f"Fases devem ter ao menos uma meta: {self.phases}")
        if self.protocol is TrainingProtocol.FAILURE_DRIVEN and min(self.phases) < 2:
            raise ValueError("Protocolo failure-driven exige fases com >= 2 metas")
        if self.problems_per_phase < 1:
            raise ValueError(
                f"problems_per_phase deve ser positivo: {self.problems_per_phase}"
            )
        if self.training_problems is not None and self.training_problems < 0:
            raise ValueError(
                f"training_problems não pode ser negativo: {self.training_problems}"
            )
        if not self.modes:
            raise ValueError("Experimento sem modos")
        if len(set(self.modes)) != len(self.modes):
            raise ValueError(f"Modos repetidos: {[m.value for m in self.modes]}")
        # valida orçamento e limite de passos antecipadamente
        self.limits(max(self.phases))

    @property
    def n_training(self) -> int:
        if self.training_problems is None:
            return self.problems_per_phase
        return self.training_problems

    def limits(self, n_goals: int) -> SearchLimits:
        bound = self.step_bound or self.config.step_bound(n_goals)
        return SearchLimits(bound, self.node_budget, self.time_budget)

    def problem_seed(self, phase: int, stream: int, index: int) -> int:
        """Semente do problema `index` do fluxo (treino, teste) da fase."""
        return self.seed * 10**9 + phase * 10**6 + stream * 10**5 + index
