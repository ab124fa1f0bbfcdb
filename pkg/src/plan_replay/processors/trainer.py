"""Construção da biblioteca de casos a partir de problemas resolvidos."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum

from plan_replay.core.lifting import Lifter
from plan_replay.core.replay import (
    CONFIRM_MARGIN,
    adapt,
    confirm_reason,
    instance_lifter,
)
from plan_replay.core.search import search
from plan_replay.errors import LibraryError
from plan_replay.models import (
    CaseFailureReason,
    CaseInstance,
    ProblemSpec,
    Recovered,
    ReplayMode,
    SearchLimits,
    SearchStrategy,
    Sequenced,
    Solution,
)
from plan_replay.storage.library import CaseLibrary
from plan_replay.utils import get_logger

logger = get_logger(__name__)

LimitsFor = Callable[[int], SearchLimits]


class AttemptResult(str, Enum):
    STORED = "stored"  # caso de topo novo
    SEQUENCED = "sequenced"  # replay estendido sem recuperação
    REPAIRED = "repaired"  # razão anotada no caso que falhou
    UNCHANGED = "unchanged"  # resolvido, mas nada novo a guardar
    FAILED = "failed"


@dataclass
class TrainingReport:
    """Tamanho da biblioteca após cada problema e contagem dos desfechos."""

    history: list[int] = field(default_factory=list)
    results: dict[AttemptResult, int] = field(default_factory=dict)

    def count(self, result: AttemptResult) -> None:
        self.results[result] = self.results.get(result, 0) + 1


def failing_instance(
    instances: Sequence[CaseInstance], reason: CaseFailureReason, lifter: Lifter
) -> CaseInstance:
    """Instância que cobre mais metas da razão; empate fica com a primeira."""
    reason_goals = set(reason.goals)

    def overlap(instance: CaseInstance) -> int:
        return sum(1 for g in instance.covered if lifter.literal(g) in reason_goals)

    return max(instances, key=overlap)


def _stored_result(case_id: int | None) -> AttemptResult:
    return AttemptResult.STORED if case_id is not None else AttemptResult.UNCHANGED


class Trainer:
    """
    Treina a biblioteca meta a meta.

    Para cada problema, o prefixo com a primeira meta é resolvido (do zero se
    nenhum caso o cobre) e as metas seguintes são acrescentadas uma a uma.
    Quando o replay dos casos recuperados falha e a recuperação encontra a
    solução, a razão de falha identifica as metas que interagem e um caso de
    reparo cobrindo só essas metas é guardado sob o caso que falhou. Razões
    marcadas como não sólidas por cortes de profundidade são conferidas com
    `confirm_margin` passos a mais antes de anotar o caso.
    """

    def __init__(
        self,
        library: CaseLibrary,
        strategy: SearchStrategy = SearchStrategy.BEST_FIRST,
        limits: SearchLimits | LimitsFor | None = None,
        check_systematicity: bool = False,
        confirm_margin: int = CONFIRM_MARGIN,
    ):
        self.library = library
        self.strategy = SearchStrategy(strategy)
        self._limits = limits
        self.check_systematicity = check_systematicity
        self.confirm_margin = confirm_margin

    def limits(self, n_goals: int) -> SearchLimits | None:
        if callable(self._limits):
            return self._limits(n_goals)
        return self._limits

    # ------------------------------------------------------------------
    # Episódios
    # ------------------------------------------------------------------

    def _store(self, *args, **kwargs) -> int | None:
        try:
            return self.library.store(*args, **kwargs)
        except LibraryError as e:
            logger.warning(f"Caso não armazenado: {e}")
            return None

    def store_scratch(self, problem: ProblemSpec) -> AttemptResult:
        """Resolve do zero e guarda a derivação inteira como caso de topo."""
        outcome = search(
            problem,
            self.strategy,
            self.limits(len(problem.goals)),
            check_systematicity=self.check_systematicity,
        )
        if not isinstance(outcome, Solution):
            logger.warning(f"❌ {problem.name} sem solução no treino")
            return AttemptResult.FAILED
        stored = self._store(outcome.trace, problem)
        return _stored_result(stored)

    def attempt(self, problem: ProblemSpec) -> AttemptResult:
        """Um episódio em modo de aprendizado sobre `problem`."""
        retrieval = self.library.retrieve(problem, ReplayMode.LEARNING)
        if not retrieval.instances:
            return self.store_scratch(problem)

        lifter = instance_lifter(problem, retrieval.instances)
        outcome, _ = adapt(
            problem,
            retrieval.instances,
            self.strategy,
            self.limits(len(problem.goals)),
            check_systematicity=self.check_systematicity,
            lifter=lifter,
        )
        if isinstance(outcome, Sequenced):
            return AttemptResult.SEQUENCED
        if not isinstance(outcome, Recovered):
            logger.warning(f"❌ {problem.name} sem solução no treino")
            return AttemptResult.FAILED

        trace = outcome.solution.trace
        reason = outcome.failure_reason
        if reason is None:
            logger.warning(f"Recuperação sem razão de falha em {problem.name}")
            stored = self._store(trace, problem)
            return _stored_result(stored)

        reason = confirm_reason(
            problem,
            retrieval.instances,
            reason,
            self.strategy,
            self.limits(len(problem.goals)),
            self.confirm_margin,
            lifter,
        )
        failing = failing_instance(retrieval.instances, reason, lifter)
        before = len(failing.case.annotations)
        self._store(trace, problem, reason, failing.case, lifter=lifter)
        annotated = len(self.library.get(failing.case.case_id).annotations) > before
        return AttemptResult.REPAIRED if annotated else AttemptResult.UNCHANGED

    def train_problem(self, problem: ProblemSpec) -> list[AttemptResult]:
        """Acrescenta as metas de `problem` uma a uma."""
        results = []
        for k in range(1, len(problem.goals) + 1):
            sub = problem.with_goals(problem.goals[:k])
            result = self.attempt(sub)
            results.append(result)
            if result is AttemptResult.FAILED:
                break
        return results

    def train(self, problems: Iterable[ProblemSpec]) -> TrainingReport:
        report = TrainingReport()
        for problem in problems:
            for result in self.train_problem(problem):
                report.count(result)
            report.history.append(len(self.library))
            logger.debug(f"{problem.name}: biblioteca com {len(self.library)} casos")
        logger.info(
            f"✓ Treino concluído: {len(report.history)} problemas, "
            f"{len(self.library)} casos"
        )
        return report


def train(
    problems: Iterable[ProblemSpec],
    library: CaseLibrary,
    strategy: SearchStrategy = SearchStrategy.BEST_FIRST,
    limits: SearchLimits | LimitsFor | None = None,
    check_systematicity: bool = False,
) -> list[int]:
    """Treina a biblioteca; devolve o tamanho dela após cada problema."""
    trainer = Trainer(library, strategy, limits, check_systematicity)
    return trainer.train(problems).history
