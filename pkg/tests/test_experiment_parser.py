"""Tests for experiment definition files."""

import pytest

from plan_replay.domain_configs import LogisticsConfig, Theta2Config
from plan_replay.errors import ExperimentSpecError
from plan_replay.models import ReplayMode, SearchStrategy, TrainingProtocol
from plan_replay.parsers.experiment import load_bundled_experiment, parse_experiment

# ==========================================================
# Arquivos empacotados
# ==========================================================


def test_theta2_bench():
    """Testa o experimento de aprendizado por falhas do domínio θ2."""
    spec = load_bundled_experiment("theta2-bench.sexp")

    assert spec.name == "THETA2-BENCH"
    assert isinstance(spec.config, Theta2Config) and spec.config.m == 5
    assert spec.protocol is TrainingProtocol.FAILURE_DRIVEN
    assert spec.phases == (2, 3, 4)
    assert spec.modes == (ReplayMode.SCRATCH, ReplayMode.STATIC, ReplayMode.LEARNING)
    assert spec.strategy is SearchStrategy.BEST_FIRST
    assert spec.n_training == 10
    assert spec.limits(3).step_bound == 4, "θ2 usa metas + 1"


def test_logistics_merge():
    """Testa opções de configuração booleanas e modos sem justificativa."""
    spec = load_bundled_experiment("logistics-merge.sexp")

    assert isinstance(spec.config, LogisticsConfig)
    assert spec.config.same_destination
    assert spec.config.planes == 1
    assert spec.protocol is TrainingProtocol.MERGE
    assert ReplayMode.LEARNING_NOJUST in spec.modes
    assert spec.node_budget == 20_000


def test_logistics_failure_driven():
    """Testa o experimento de falhas na logística de rota restrita."""
    spec = load_bundled_experiment("logistics-failure-driven.sexp")

    assert isinstance(spec.config, LogisticsConfig)
    assert spec.config.route_restricted and spec.config.same_destination
    assert (spec.config.cities, spec.config.planes, spec.config.trucks) == (4, 1, 0)
    assert spec.config.packages == 8
    assert spec.protocol is TrainingProtocol.FAILURE_DRIVEN
    assert spec.phases == (2, 3, 4)
    assert spec.modes == (ReplayMode.SCRATCH, ReplayMode.STATIC, ReplayMode.LEARNING)
    assert spec.config.domain.name == "LOGISTICS-ROUTE-RESTRICTED"


def test_problem_seeds_are_distinct():
    """Testa que fases, fluxos e índices geram sementes diferentes."""
    spec = load_bundled_experiment("theta2-bench.sexp")
    seeds = {
        spec.problem_seed(phase, stream, index)
        for phase in spec.phases
        for stream in (0, 1)
        for index in range(20)
    }
    assert len(seeds) == len(spec.phases) * 2 * 20


# ==========================================================
# Erros
# ==========================================================


BASE = "(experiment X :domain theta2 :protocol {protocol} :phases {phases} {extra})"


@pytest.mark.parametrize(
    "text, message",
    [
        (BASE.format(protocol="merge", phases="(2)", extra=""), "problems-per-phase"),
        (
            BASE.format(
                protocol="failure-driven", phases="(1 2)", extra=":problems-per-phase 2"
            ),
            "failure-driven",
        ),
        (
            BASE.format(
                protocol="merge", phases="(2)", extra=":problems-per-phase 2 :x 1"
            ),
            "desconhecidas",
        ),
        (
            BASE.format(protocol="random", phases="(2)", extra=":problems-per-phase 2"),
            "random",
        ),
        (
            "(experiment X :domain satellite :protocol merge :phases (2) "
            ":problems-per-phase 2)",
            "satellite",
        ),
        ("(experiment X :domain theta2", "não fechado"),
    ],
)
def test_invalid_experiments(text, message):
    """Testa mensagens de erro para especificações inválidas."""
    with pytest.raises(ExperimentSpecError, match=message):
        parse_experiment(text)


def test_invalid_config_value():
    """Testa argumento de configuração rejeitado pelo domínio."""
    text = (
        "(experiment X :domain theta2 :config (:m -1) :protocol merge "
        ":phases (2) :problems-per-phase 2)"
    )
    with pytest.raises(ExperimentSpecError, match="Configuração inválida"):
        parse_experiment(text)
