"""Tests for the partial-plan algebra: flaws, refinements and consistency."""

from plan_replay.core.refinement import (
    check_consistency,
    detect_flaws,
    instantiate_step,
    make_null_plan,
    rank,
    refine,
)
from plan_replay.models import (
    GOAL_STEP,
    START_STEP,
    BindingConflict,
    BindingSet,
    CausalLink,
    Codesignation,
    DecisionKind,
    InitContradiction,
    Literal,
    OpenCondition,
    OrderingCycle,
    PartialPlan,
    Threat,
)

# ==========================================================
# Helpers
# ==========================================================


def threatened_plan(problem) -> PartialPlan:
    """LOAD-PLANE consome (AT-OB OB1 l_i) de t_I; LOAD-TRUCK paralelo a remove."""
    domain = problem.domain
    null = make_null_plan(problem)
    load_plane, c1 = instantiate_step(domain.schema("LOAD-PLANE"), 1)
    load_truck, c2 = instantiate_step(domain.schema("LOAD-TRUCK"), 2)
    bindings = BindingSet().extend(
        [
            *c1,
            *c2,
            Codesignation.of("?O.1", "OB1"),
            Codesignation.of("?L.1", "l_i"),
            Codesignation.of("?O.2", "OB1"),
            Codesignation.of("?L.2", "l_i"),
        ]
    )
    link = CausalLink(START_STEP, Literal("AT-OB", ("OB1", "l_i")), 1)
    return PartialPlan(
        problem=problem,
        steps=null.steps + (load_plane, load_truck),
        orderings=null.orderings | {(0, 1), (1, GOAL_STEP), (0, 2), (2, GOAL_STEP)},
        bindings=bindings,
        links=frozenset({link}),
        open_conditions=null.open_conditions,
        next_id=3,
    )


# ==========================================================
# Plano nulo e falhas
# ==========================================================


def test_null_plan(two_packages):
    """Testa t_I, t_G e a pilha de condições abertas do plano nulo."""
    plan = make_null_plan(two_packages)

    assert plan.step_count == 0
    assert plan.orderings == frozenset({(START_STEP, GOAL_STEP)})
    assert plan.step(START_STEP).effects == tuple(sorted(two_packages.init))
    flaws = detect_flaws(plan)
    assert [f.condition for f in flaws] == list(two_packages.goals), (
        "A primeira meta deve ser a primeira falha tratada"
    )


def test_threats_come_first(one_package):
    """Testa que ameaças precedem condições abertas."""
    plan = threatened_plan(one_package)
    flaws = detect_flaws(plan)

    assert isinstance(flaws[0], Threat)
    assert flaws[0].clobberer == 2
    assert flaws[0].effect == Literal("AT-OB", ("?O.2", "?L.2"), False)
    assert isinstance(flaws[-1], OpenCondition)
    assert rank(plan) == len(plan.steps) + len(plan.open_conditions) + 1


# ==========================================================
# Refinamentos
# ==========================================================


def test_refine_open_condition(one_package):
    """Testa NEW-LINK de t_I inconsistente e NEW-STEP pelos dois descarregamentos."""
    plan = make_null_plan(one_package)
    children = refine(plan, detect_flaws(plan)[0])

    links = [c for c in children if c.decision.kind is DecisionKind.NEW_LINK]
    steps = [c for c in children if c.decision.kind is DecisionKind.NEW_STEP]
    assert len(links) == 1
    assert isinstance(links[0].violation, InitContradiction)
    assert links[0].violation.literal == Literal("AT-OB", ("OB1", "l_d"))
    assert [c.decision.step.name for c in steps] == ["UNLOAD-TRUCK", "UNLOAD-PLANE"]
    assert all(c.consistent for c in steps)

    child = steps[1].plan
    assert child.step_count == 1
    assert child.bindings.value("?Li.1") == "l_d"
    assert child.precedes(START_STEP, 1) and child.precedes(1, GOAL_STEP)
    assert plan.step_count == 0, "O pai não pode ser alterado"


def test_refine_threat(one_package):
    """Testa promoção consistente e rebaixamento que fecha um ciclo."""
    plan = threatened_plan(one_package)
    promotion, demotion = refine(plan, detect_flaws(plan)[0])

    assert promotion.decision.kind is DecisionKind.PROMOTION
    assert promotion.consistent
    assert promotion.plan.precedes(1, 2)
    assert demotion.decision.kind is DecisionKind.DEMOTION
    assert isinstance(demotion.violation, OrderingCycle)


# ==========================================================
# Consistência
# ==========================================================


def test_binding_conflict(one_package):
    """Testa classe com duas constantes e o caminho de igualdades que a explica."""
    null = make_null_plan(one_package)
    plan = PartialPlan(
        problem=one_package,
        steps=null.steps,
        orderings=null.orderings,
        bindings=BindingSet().extend(
            (Codesignation.of("?x", "a"), Codesignation.of("?x", "b"))
        ),
        links=frozenset(),
        open_conditions=(),
    )
    violation = check_consistency(plan)

    assert isinstance(violation, BindingConflict)
    assert violation.distinction == Codesignation.of("a", "b", equal=False)
    expected = {Codesignation.of("?x", "a"), Codesignation.of("?x", "b")}
    assert set(violation.path) == expected


def test_consistent_plan(one_package):
    """Testa que o plano nulo é consistente."""
    assert check_consistency(make_null_plan(one_package)) is None
