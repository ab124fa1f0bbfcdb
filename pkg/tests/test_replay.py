"""Tests for eager replay, decision validation and adaptation."""

import pytest

from plan_replay.core import adapt, replay, search, validate_decision
from plan_replay.core.replay import TraceMapping, ValidDecision, SkippedDecision
from plan_replay.core.refinement import make_null_plan
from plan_replay.models import (
    Failed,
    Literal,
    ReplayMetrics,
    ReplayMode,
    Sequenced,
    SkipReason,
    Solution,
)
from plan_replay.parsers import deserialize_trace
from plan_replay.parsers.domain import bundled_text
from plan_replay.processors import verify_solution

# ==========================================================
# Fixtures
# ==========================================================


@pytest.fixture
def one_package_case(library, one_package):
    """Biblioteca com a derivação do problema de um pacote."""
    outcome = search(one_package)
    assert isinstance(outcome, Solution)
    case_id = library.store(outcome.trace, one_package)
    assert case_id == 1
    return library.get(case_id)


# ==========================================================
# Validação de decisões
# ==========================================================


def test_first_decision_is_valid(one_package):
    """Testa que o NEW-STEP do traço de referência vale no plano nulo."""
    trace = deserialize_trace(bundled_text("one-package-trace.sexp"))
    mapping = TraceMapping(terms={"?_OB1": "OB1", "?_l_d": "l_d"})
    plan = make_null_plan(one_package)
    result = validate_decision(trace.decisions[0], plan, mapping)

    assert isinstance(result, ValidDecision)
    assert result.steps[1] == 1
    assert result.refinement.decision.step.name == "UNLOAD-PLANE"


def test_unmapped_step_is_skipped(one_package):
    """Testa que decisões sobre passos não replicados são puladas."""
    trace = deserialize_trace(bundled_text("one-package-trace.sexp"))
    result = validate_decision(
        trace.decisions[1], make_null_plan(one_package), TraceMapping()
    )

    assert isinstance(result, SkippedDecision)
    assert result.reason is SkipReason.INVALID_PRECONDITION


def test_golden_trace_replays_completely(one_package):
    """Testa o replay de todas as decisões do traço de referência."""
    trace = deserialize_trace(bundled_text("one-package-trace.sexp"))
    substitution = {
        "?_OB1": "OB1",
        "?_l_d": "l_d",
        "?_l_i": "l_i",
        "?_PL1": "PL1",
        "?_l_p": "l_p",
    }
    node, log, _ = replay([(trace, substitution)], one_package)

    assert len(log.replayed) == len(trace.decisions)
    assert not log.skipped
    assert node.plan.step_count == 4
    assert not node.plan.open_conditions


# ==========================================================
# Adaptação
# ==========================================================


def test_adapt_sequences_renamed_problem(
    one_package_case, library, renamed_one_package
):
    """Testa replay do caso em um problema com outros objetos."""
    retrieval = library.retrieve(renamed_one_package, ReplayMode.STATIC)
    assert len(retrieval.instances) == 1
    assert retrieval.instances[0].mapping["?_OB1"] == "OB7"

    outcome, metrics = adapt(renamed_one_package, retrieval.instances)

    assert isinstance(outcome, Sequenced)
    assert metrics.seq
    assert metrics.der == 1.0, "Todas as decisões do caminho vêm do replay"
    assert metrics.rep == 1.0
    verify_solution(renamed_one_package, outcome.solution)


def test_adapt_without_cases_is_scratch(one_package):
    """Testa adaptação sem instâncias: busca do zero e seq falso."""
    outcome, metrics = adapt(one_package, [])

    assert not isinstance(outcome, Failed)
    assert not metrics.seq
    assert metrics.der == 0.0


def test_replay_metrics_range():
    """Testa rejeição de frações fora de [0, 1]."""
    with pytest.raises(ValueError, match="der"):
        ReplayMetrics(seq=True, der=1.5, rep=0.0)


def test_adapt_extends_with_new_goal(one_package_case, library, one_package):
    """Testa extensão do esqueleto para uma meta a mais."""
    problem = one_package.with_goals(
        one_package.goals + (Literal("AT-PL", ("PL1", "l_d")),)
    )
    retrieval = library.retrieve(problem, ReplayMode.STATIC)
    assert Literal("AT-PL", ("PL1", "l_d")) in retrieval.uncovered

    outcome, metrics = adapt(problem, retrieval.instances)

    assert not isinstance(outcome, Failed)
    assert 0.0 < metrics.der <= 1.0
    verify_solution(problem, outcome.solution)


def test_replayed_nodes_are_counted_apart(
    one_package_case, library, renamed_one_package
):
    """Testa que os nós criados pelo replay não entram nos nós visitados."""
    retrieval = library.retrieve(renamed_one_package, ReplayMode.STATIC)
    outcome, _ = adapt(renamed_one_package, retrieval.instances)

    assert isinstance(outcome, Sequenced)
    assert outcome.stats.replay_nodes == len(one_package_case.trace.decisions)
    assert outcome.stats.nodes_visited == 1, "Esqueleto completo: só a raiz"


def test_skeleton_without_replayed_decisions_is_not_sequenced(one_package):
    """Testa que um esqueleto sem decisões replicadas não conta como seq."""
    skeletal, log, _ = replay([], one_package)
    assert not log.replayed

    outcome = search(one_package, skeletal=skeletal)

    assert isinstance(outcome, Solution)
    assert not outcome.sequenced
    assert outcome.stats.replay_nodes == 0
