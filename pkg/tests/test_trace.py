"""Tests for trace extraction, lifting and the trace file format."""

import pytest

from plan_replay.core import Lifter, footprint, lift, search
from plan_replay.errors import ParseError
from plan_replay.models import (
    GOAL_STEP,
    START_STEP,
    CaseFailureReason,
    DecisionKind,
    DecisionType,
    Literal,
    SearchLimits,
    Solution,
)
from plan_replay.parsers import (
    deserialize_reason,
    deserialize_trace,
    serialize_reason,
    serialize_trace,
)
from plan_replay.parsers.domain import bundled_text

# ==========================================================
# Fixtures
# ==========================================================


@pytest.fixture
def golden_trace():
    """Derivação generalizada de referência do problema de um pacote."""
    return deserialize_trace(bundled_text("one-package-trace.sexp"))


@pytest.fixture
def one_package_solution(one_package) -> Solution:
    outcome = search(one_package)
    assert isinstance(outcome, Solution)
    return outcome


# ==========================================================
# Extração
# ==========================================================


def test_extracted_trace_follows_search_path(one_package_solution):
    """Testa um registro por decisão do caminho, começando em START-NODE."""
    trace = one_package_solution.trace

    assert trace.records[0].type is DecisionType.START_NODE
    assert [r.name for r in trace.records] == [
        f"G{i}" for i in range(1, len(trace.records) + 1)
    ]
    first = trace.decisions[0]
    assert first.kind is DecisionKind.NEW_STEP
    assert first.open_cond.consumer == GOAL_STEP
    assert first.new_step.predicate == "UNLOAD-PLANE"
    assert Literal("AT-OB", ("OB1", "l_i")) in trace.footprint


def test_lift_generalizes_constants(one_package_solution, logistics):
    """Testa que objetos do problema viram ?_X e AIRPORT permanece."""
    lifter = Lifter(logistics.constants)
    lifted = lift(one_package_solution.trace, one_package_solution.trace.goals, lifter)

    assert lifted.goals == (Literal("AT-OB", ("?_OB1", "?_l_d")),)
    assert Literal("AT-OB", ("?_OB1", "?_l_i")) in lifted.footprint
    assert Literal("IS-A", ("AIRPORT", "?_l_d")) in lifted.footprint
    assert len(lifted.records) == len(one_package_solution.trace.records)
    assert footprint(one_package_solution.trace, lifter) == lifted.footprint


def test_lift_keeps_only_relevant_decisions(two_packages, route_restricted):
    """Testa o fecho de dependência ao manter só a primeira meta."""
    outcome = search(two_packages, limits=SearchLimits(step_bound=8))
    assert isinstance(outcome, Solution)
    first = two_packages.goals[0]

    lifted = lift(outcome.trace, [first], Lifter(route_restricted.constants))

    assert lifted.goals == (Literal("AT-OB", ("?_OB1", "?_l_d")),)
    assert len(lifted.records) < len(outcome.trace.records)
    created = [r.created_step for r in lifted.records if r.created_step is not None]
    assert created == list(range(1, len(created) + 1)), "Passos renumerados em ordem"
    for record in lifted.decisions:
        if record.new_link is not None and record.new_link.producer != START_STEP:
            assert record.new_link.producer in created


# ==========================================================
# Formato de arquivo
# ==========================================================


def test_golden_trace_shape(golden_trace):
    """Testa registros, irmãos NEW-LINK e a promoção do traço de referência."""
    assert len(golden_trace.records) == 11
    assert golden_trace.goals == (Literal("AT-OB", ("?_OB1", "?_l_d")),)
    kinds = [r.kind for r in golden_trace.decisions]
    assert kinds.count(DecisionKind.NEW_STEP) == 4
    assert kinds.count(DecisionKind.PROMOTION) == 1

    g4 = golden_trace.records[3]
    assert g4.siblings == frozenset({("START", Literal("AT-PL", ("?0", "?1")))})
    g10 = golden_trace.records[9]
    assert g10.type is DecisionType.RESOLUTION
    assert g10.effect == (2, Literal("AT-PL", ("?_PL1", "?_l_i"), False))


def test_planner_reproduces_golden_trace(
    one_package_solution, golden_trace, logistics
):
    """Testa o traço do planejador contra o de referência, decisão a decisão."""
    lifter = Lifter(logistics.constants)
    lifted = lift(one_package_solution.trace, one_package_solution.trace.goals, lifter)

    assert len(one_package_solution.actions) == 4
    assert lifted.goals == golden_trace.goals
    assert set(lifted.footprint) == set(golden_trace.footprint)
    assert [r.type for r in lifted.records] == [r.type for r in golden_trace.records]
    assert [r.kind for r in lifted.decisions] == [
        r.kind for r in golden_trace.decisions
    ]
    steps = [r.new_step.predicate for r in lifted.decisions if r.new_step is not None]
    assert steps == ["UNLOAD-PLANE", "FLY-PLANE", "FLY-PLANE", "LOAD-PLANE"]


def test_trace_file_round_trip(golden_trace):
    """Testa que o traço reescrito é lido de volta com a mesma forma canônica."""
    again = deserialize_trace(serialize_trace(golden_trace))
    assert again.canonical() == golden_trace.canonical()
    assert again.footprint == golden_trace.footprint


def test_reason_round_trip():
    """Testa a escrita de uma razão com condição negativa e sem solidez."""
    reason = CaseFailureReason(
        goals=(Literal("G1"),), conditions=(Literal("I1", (), False),), sound=False
    )
    assert deserialize_reason(serialize_reason(reason)) == reason


def test_trace_must_start_with_start_node():
    """Testa rejeição de traço sem START-NODE."""
    text = "(trace :version 1 :goals () :footprint () :decisions ())"
    with pytest.raises(ParseError):
        deserialize_trace(text)
