"""Resolução de um problema em um modo (scratch, static, learning)."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Union

from plan_replay.core.executor import entails, execute
from plan_replay.core.replay import adapt, instance_lifter
from plan_replay.core.search import search
from plan_replay.errors import SolutionExtractionError
from plan_replay.models import (
    MetricsRow,
    ProblemSpec,
    RetrievalResult,
    ReplayMetrics,
    ReplayMode,
    SearchLimits,
    SearchStrategy,
    Solution,
)
from plan_replay.models.explanation import CaseFailureReason
from plan_replay.models.replay import AdaptOutcome, Failed, Recovered
from plan_replay.models.search import (
    BudgetExceeded,
    Exhausted,
    SearchOutcome,
    SearchStats,
)
from plan_replay.storage.library import CaseLibrary
from plan_replay.utils import get_logger

logger = get_logger(__name__)

EpisodeOutcome = Union[SearchOutcome, AdaptOutcome]
SCRATCH_METRICS = ReplayMetrics(seq=False, der=0.0, rep=0.0)


@dataclass(frozen=True)
class Episode:
    problem: ProblemSpec
    mode: ReplayMode
    outcome: EpisodeOutcome
    metrics: ReplayMetrics
    retrieval: RetrievalResult
    wall_time: float

    @property
    def solution(self) -> Solution | None:
        if isinstance(self.outcome, Solution):
            return self.outcome
        return getattr(self.outcome, "solution", None)

    @property
    def solved(self) -> bool:
        return self.solution is not None

    @property
    def stats(self) -> SearchStats:
        return self.outcome.stats

    @property
    def failure_reason(self) -> CaseFailureReason | None:
        outcome = self.outcome
        if isinstance(outcome, (Exhausted, BudgetExceeded)):
            return outcome.reason
        if isinstance(outcome, (Recovered, Failed)):
            return outcome.failure_reason
        return None

    @property
    def budget_exceeded(self) -> bool:
        if isinstance(self.outcome, Failed):
            return self.outcome.budget_exceeded
        return isinstance(self.outcome, BudgetExceeded)

    def to_row(self, phase: int, library_size: int) -> MetricsRow:
        solution = self.solution
        return MetricsRow(
            phase=phase,
            mode=self.mode.value,
            problem_id=self.problem.name,
            solved=solution is not None,
            solution_length=solution.length if solution is not None else 0,
            nodes_visited=self.stats.nodes_visited,
            wall_time=self.wall_time,
            retrieval_time=self.retrieval.retrieval_time,
            seq=self.metrics.seq,
            der=self.metrics.der,
            rep=self.metrics.rep,
            library_size=library_size,
        )

    def __repr__(self) -> str:
        mark = "✓" if self.solved else "❌"
        return (
            f"<Episode {mark} {self.problem.name} mode={self.mode.value} "
            f"nodes={self.stats.nodes_visited}>"
        )


def verify_solution(problem: ProblemSpec, solution: Solution) -> None:
    """Executa o plano a partir de I; levanta SolutionExtractionError se falhar."""
    state = execute(solution.actions, problem.init)
    if not isinstance(state, frozenset):
        raise SolutionExtractionError(f"Plano inválido para {problem.name}: {state}")
    if not entails(state, problem.goals):
        raise SolutionExtractionError(f"Plano de {problem.name} não atinge as metas")


def solve_episode(
    problem: ProblemSpec,
    mode: ReplayMode | str = ReplayMode.SCRATCH,
    library: CaseLibrary | None = None,
    strategy: SearchStrategy = SearchStrategy.BEST_FIRST,
    limits: SearchLimits | None = None,
    check_systematicity: bool = False,
) -> Episode:
    """Resolve `problem` no modo pedido; a biblioteca não é alterada."""
    mode = ReplayMode(mode)
    started = time.perf_counter()

    if not mode.uses_library or library is None:
        retrieval = RetrievalResult((), tuple(problem.goals), 0.0)
        outcome: EpisodeOutcome = search(
            problem, strategy, limits, check_systematicity=check_systematicity
        )
        metrics = SCRATCH_METRICS
    else:
        retrieval = library.retrieve(problem, mode)
        outcome, metrics = adapt(
            problem,
            retrieval.instances,
            strategy,
            limits,
            increased_justification=mode.increased_justification,
            check_systematicity=check_systematicity,
            lifter=instance_lifter(problem, retrieval.instances),
        )

    episode = Episode(
        problem, mode, outcome, metrics, retrieval, time.perf_counter() - started
    )
    if episode.solution is not None:
        verify_solution(problem, episode.solution)
    logger.debug(f"Episódio concluído: {episode!r}")
    return episode
