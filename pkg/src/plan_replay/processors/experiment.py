"""Execução de experimentos: treino por fase e teste em cada modo."""

from __future__ import annotations

from dataclasses import dataclass, field

import pandas as pd

from plan_replay.core.ebl import reason_holds
from plan_replay.models import (
    ExperimentSpec,
    MetricsRow,
    ProblemSpec,
    ReplayMode,
    TrainingProtocol,
)
from plan_replay.storage.library import CaseLibrary
from plan_replay.utils import get_logger

from .aggregator import MetricsAggregator
from .episode import solve_episode
from .trainer import AttemptResult, Trainer

logger = get_logger(__name__)

TRAIN_STREAM, TEST_STREAM = 0, 1


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    rows: list[MetricsRow] = field(default_factory=list)
    training_history: dict[int, list[int]] = field(default_factory=dict)
    test_set_sizes: dict[int, int] = field(default_factory=dict)

    @property
    def summary(self) -> pd.DataFrame:
        return MetricsAggregator.summarize(self.rows)

    def rows_for(self, phase: int, mode: ReplayMode | str) -> list[MetricsRow]:
        mode = ReplayMode(mode).value
        return [r for r in self.rows if r.phase == phase and r.mode == mode]


class ExperimentRunner:
    """
    Executa um ExperimentSpec.

    Protocolos:
        failure-driven: treino do zero com n-1 metas; problemas de n metas cujo
            caso recuperado já falhou entram no teste, os demais são episódios
            de aprendizado.
        incremental: biblioteca esvaziada e retreinada com problemas de n metas.
        merge: biblioteca treinada com problemas de uma meta.

    Durante o teste a biblioteca não é alterada; todos os modos resolvem o
    mesmo conjunto de problemas.
    """

    MAX_ATTEMPTS_FACTOR = 50

    def __init__(
        self,
        spec: ExperimentSpec,
        library: CaseLibrary | None = None,
        check_systematicity: bool = False,
    ):
        self.spec = spec
        self.library = library if library is not None else CaseLibrary()
        self.check_systematicity = check_systematicity
        self.trainer = Trainer(
            self.library, spec.strategy, spec.limits, check_systematicity
        )
        self._result = ExperimentResult(spec)

    # ------------------------------------------------------------------
    # Geração
    # ------------------------------------------------------------------

    def _problems(self, config, n_goals: int, phase: int, stream: int, count: int):
        return [
            config.generate_problem(n_goals, self.spec.problem_seed(phase, stream, i))
            for i in range(count)
        ]

    def _training_config(self):
        variant = getattr(self.spec.config, "training_variant", None)
        return variant() if variant is not None else self.spec.config

    # ------------------------------------------------------------------
    # Protocolos
    # ------------------------------------------------------------------

    def previously_failed(self, problem: ProblemSpec) -> bool:
        """Algum caso recuperado estaticamente tem razão de falha que vale aqui."""
        retrieval = self.library.retrieve(problem, ReplayMode.STATIC)
        return any(
            reason_holds(annotation.reason, problem, instance.mapping)
            for instance in retrieval.instances
            for annotation in instance.case.annotations
        )

    def _failure_driven(self, phase: int, n_goals: int) -> list[ProblemSpec]:
        config = self._training_config()
        training = self._problems(
            config, n_goals - 1, phase, TRAIN_STREAM, self.spec.n_training
        )
        for problem in training:
            self.trainer.store_scratch(problem)
        self._result.training_history[phase] = [len(self.library)]

        wanted = self.spec.problems_per_phase
        test: list[ProblemSpec] = []
        attempts = 0
        while len(test) < wanted and attempts < wanted * self.MAX_ATTEMPTS_FACTOR:
            seed = self.spec.problem_seed(phase, TEST_STREAM, attempts)
            problem = self.spec.config.generate_problem(n_goals, seed)
            attempts += 1
            if self.previously_failed(problem):
                test.append(problem)
                continue
            result = self.trainer.attempt(problem)
            logger.debug(f"Episódio de aprendizado {problem.name}: {result.value}")
            self._result.training_history[phase].append(len(self.library))
        if len(test) < wanted:
            logger.warning(
                f"Fase {phase}: só {len(test)} de {wanted} problemas de teste "
                f"após {attempts} tentativas"
            )
        return test

    def _incremental(self, phase: int, n_goals: int) -> list[ProblemSpec]:
        training = self._problems(
            self.spec.config, n_goals, phase, TRAIN_STREAM, self.spec.n_training
        )
        self._result.training_history[phase] = self.trainer.train(training).history
        return self._problems(
            self.spec.config, n_goals, phase, TEST_STREAM, self.spec.problems_per_phase
        )

    def _merge(self, phase: int, n_goals: int) -> list[ProblemSpec]:
        training = self._problems(
            self.spec.config, 1, phase, TRAIN_STREAM, self.spec.n_training
        )
        report = self.trainer.train(training)
        stored = report.results.get(AttemptResult.STORED, 0)
        logger.info(f"Fase {phase}: {stored} casos de uma meta")
        self._result.training_history[phase] = report.history
        return self._problems(
            self.spec.config, n_goals, phase, TEST_STREAM, self.spec.problems_per_phase
        )

    # ------------------------------------------------------------------
    # Execução
    # ------------------------------------------------------------------

    def run_phase(self, phase: int) -> list[MetricsRow]:
        self.library.clear()
        protocol = {
            TrainingProtocol.FAILURE_DRIVEN: self._failure_driven,
            TrainingProtocol.INCREMENTAL: self._incremental,
            TrainingProtocol.MERGE: self._merge,
        }[self.spec.protocol]
        test = protocol(phase, phase)
        self._result.test_set_sizes[phase] = len(test)
        logger.info(
            f"Fase {phase}: {len(test)} problemas de teste, "
            f"biblioteca com {len(self.library)} casos"
        )

        rows = []
        limits = self.spec.limits(phase)
        for problem in test:
            for mode in self.spec.modes:
                episode = solve_episode(
                    problem,
                    mode,
                    self.library,
                    self.spec.strategy,
                    limits,
                    self.check_systematicity,
                )
                rows.append(episode.to_row(phase, len(self.library)))
        return rows

    def run(self) -> ExperimentResult:
        self._result = ExperimentResult(self.spec)
        logger.info(
            f"Experimento {self.spec.name}: protocolo {self.spec.protocol.value}, "
            f"fases {list(self.spec.phases)}"
        )
        for phase in self.spec.phases:
            rows = self.run_phase(phase)
            self._result.rows.extend(rows)
            solved = sum(r.solved for r in rows)
            logger.info(f"✓ Fase {phase} concluída: {solved}/{len(rows)} resolvidos")
        return self._result


def run_experiment(
    spec: ExperimentSpec,
    library: CaseLibrary | None = None,
    check_systematicity: bool = False,
) -> ExperimentResult:
    return ExperimentRunner(spec, library, check_systematicity).run()
