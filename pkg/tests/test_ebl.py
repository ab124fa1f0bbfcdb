"""Tests for failure explanations, regression and failure-driven repair."""

import pytest

from plan_replay.core import adapt, confirm_reason, explain_leaf, reason_holds, regress
from plan_replay.core.ebl import build_case_failure_reason
from plan_replay.models import (
    GOAL_STEP,
    START_STEP,
    CaseFailureReason,
    CausalLink,
    Decision,
    DecisionKind,
    FailureExplanation,
    InitContradiction,
    Literal,
    OpenCondition,
    OrderingCycle,
    ProblemSpec,
    ReplayMode,
    SearchLimits,
    Sequenced,
)
from plan_replay.processors import AttemptResult, Trainer

# ==========================================================
# Fixtures
# ==========================================================


G1 = Literal("G1")
I1 = Literal("I1")


@pytest.fixture
def link_decision():
    """NEW-LINK de t_I para a meta G1."""
    flaw = OpenCondition(G1, GOAL_STEP)
    link = CausalLink(START_STEP, G1, GOAL_STEP)
    return Decision(DecisionKind.NEW_LINK, flaw, link=link)


@pytest.fixture
def repaired_library(library, two_packages):
    """Biblioteca treinada com a primeira meta e reparada com as duas."""
    trainer = Trainer(library, limits=SearchLimits(step_bound=8))
    first = two_packages.with_goals(two_packages.goals[:1])
    assert trainer.store_scratch(first) is AttemptResult.STORED
    assert trainer.attempt(two_packages) is AttemptResult.REPAIRED
    return library


# ==========================================================
# Explicações e regressão
# ==========================================================


def test_explain_init_contradiction(link_decision):
    """Testa a explicação de um vínculo de t_I para um literal ausente de I."""
    violation = InitContradiction(link_decision.link, G1)
    expl = explain_leaf(None, violation)

    assert expl.links == frozenset({link_decision.link})
    assert expl.effects == frozenset({(START_STEP, G1.negate())})


def test_explain_ordering_cycle():
    """Testa que a explicação de um ciclo são as próprias arestas."""
    expl = explain_leaf(None, OrderingCycle(((1, 2), (2, 1))))
    assert expl.orderings == frozenset({(1, 2), (2, 1)})


def test_regress_replaces_added_constraints(link_decision):
    """Testa que o vínculo adicionado vira a condição aberta que ele resolveu."""
    expl = FailureExplanation(
        links=frozenset({link_decision.link}),
        effects=frozenset({(START_STEP, G1.negate())}),
    )
    parent = regress(expl, link_decision)

    assert parent.links == frozenset()
    assert parent.open_conditions == frozenset({link_decision.flaw})
    assert parent.effects == expl.effects


def test_regress_passes_unrelated_explanation(link_decision):
    """Testa que explicações que não citam a decisão passam inalteradas."""
    expl = FailureExplanation(effects=frozenset({(START_STEP, I1.negate())}))
    assert regress(expl, link_decision) == expl


def test_case_failure_reason_from_root_explanations():
    """Testa a projeção nas metas e nas condições de t_I."""
    expl = FailureExplanation(
        open_conditions=frozenset({OpenCondition(G1, GOAL_STEP)}),
        effects=frozenset({(START_STEP, I1.negate())}),
    )
    reason = build_case_failure_reason([expl], depth_limited=True)

    assert reason == CaseFailureReason((G1,), (I1.negate(),), sound=False)
    with pytest.raises(ValueError):
        build_case_failure_reason([], depth_limited=False)


def test_reason_holds_in_closed_world(theta2):
    """Testa condição negativa lida sob mundo fechado."""
    reason = CaseFailureReason((G1,), (I1.negate(),))
    without = ProblemSpec("A", theta2, frozenset({Literal("P-BETA")}), (G1,))
    with_i1 = ProblemSpec("B", theta2, frozenset({I1, Literal("P-BETA")}), (G1,))

    assert reason_holds(reason, without, {})
    assert not reason_holds(reason, with_i1, {})


# ==========================================================
# Reparo guiado por falhas
# ==========================================================


def test_interacting_goals_are_annotated(repaired_library):
    """Testa a razão com as duas metas e o caso de reparo abaixo do caso 1."""
    case = repaired_library.get(1)
    assert len(case.annotations) == 1
    annotation = case.annotations[0]
    assert {
        Literal("AT-OB", ("?_OB1", "?_l_d")),
        Literal("AT-OB", ("?_OB2", "?_l_d")),
    } <= set(annotation.reason.goals)

    repair = repaired_library.get(annotation.repair_id)
    assert repair.parent_id == 1
    assert repair.repair_depth == 1
    assert set(annotation.reason.goals) <= set(repair.goals)
    assert repair not in repaired_library.top_level


def test_learning_retrieval_follows_annotation(repaired_library, two_packages):
    """Testa censura em modo de aprendizado e ausência dela em modo estático."""
    static = repaired_library.retrieve(two_packages, ReplayMode.STATIC)
    learning = repaired_library.retrieve(two_packages, ReplayMode.LEARNING)
    repair_id = repaired_library.get(1).annotations[0].repair_id

    assert {inst.case.case_id for inst in static.instances} == {1}
    assert learning.instances[0].case.case_id == repair_id
    assert set(learning.covered) == set(two_packages.goals)
    assert not learning.uncovered


def test_repair_is_not_stored_twice(repaired_library, two_packages):
    """Testa que a mesma falha não gera uma segunda anotação."""
    trainer = Trainer(repaired_library, limits=SearchLimits(step_bound=8))
    result = trainer.attempt(two_packages)

    assert result is not AttemptResult.REPAIRED
    assert len(repaired_library.get(1).annotations) == 1


def test_off_route_reason_is_sound(repaired_library):
    """Testa a razão do pacote fora da rota: sólida e com as condições negadas."""
    reason = repaired_library.get(1).annotations[0].reason

    assert reason.sound, "Cortes de profundidade não entram na explicação"
    assert Literal("AT-OB", ("?_OB2", "?_l_d"), False) in reason.conditions
    assert any(
        c.predicate == "INSIDE-PL" and not c.positive and c.args[0] == "?_OB2"
        for c in reason.conditions
    )
    for condition in reason.conditions:
        assert not condition.positive
        assert condition.predicate in ("AT-OB", "INSIDE-PL")
        assert condition.args[0] == "?_OB2", "Só o pacote fora da rota entra em E"


def test_sound_reason_censors_without_repair(repaired_library, two_packages):
    """Testa que uma razão sólida sem reparo alcançável descarta o caso."""
    first = two_packages.goals[0]
    repaired_library.repair_depth_limit = 0
    learning = repaired_library.retrieve(two_packages, ReplayMode.LEARNING)

    assert first in learning.uncovered
    assert all(first not in inst.covered for inst in learning.instances)
    assert all(not inst.case.is_repair for inst in learning.instances)


def test_censored_case_alone_never_sequences(repaired_library, two_packages):
    """Testa que o caso censurado, replicado sozinho, precisa de recuperação."""
    static = repaired_library.retrieve(two_packages, ReplayMode.STATIC)
    outcome, metrics = adapt(
        two_packages, static.instances, limits=SearchLimits(step_bound=8)
    )

    assert not isinstance(outcome, Sequenced)
    assert not metrics.seq


def test_confirm_reason_keeps_sound_reasons(two_packages):
    """Testa que razões já sólidas voltam sem nova busca."""
    reason = CaseFailureReason((G1,), ())
    assert confirm_reason(two_packages, [], reason) is reason
