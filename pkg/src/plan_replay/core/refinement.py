"""Álgebra de planos parciais: falhas, refinamentos, consistência e extração."""

from __future__ import annotations

import networkx as nx

from plan_replay.errors import SolutionExtractionError
from plan_replay.models.bindings import BindingSet, Codesignation, UnifyFailure, unify
from plan_replay.models.literals import Literal, is_variable
from plan_replay.models.operators import GroundAction, OperatorSchema, ProblemSpec
from plan_replay.models.plan import (
    GOAL_NAME,
    GOAL_STEP,
    START_NAME,
    START_STEP,
    BindingConflict,
    CausalLink,
    Decision,
    DecisionKind,
    Flaw,
    InitContradiction,
    OpenCondition,
    OrderingCycle,
    PartialPlan,
    Refinement,
    Step,
    Threat,
    Violation,
)
from plan_replay.utils.logging import get_logger

from .executor import ExecutionFailure, entails, execute

logger = get_logger(__name__)


# ============================================================================
# Plano nulo e detecção de falhas
# ============================================================================


def make_null_plan(problem: ProblemSpec) -> PartialPlan:
    start = Step(START_STEP, START_NAME, effects=tuple(sorted(problem.init)))
    goal = Step(GOAL_STEP, GOAL_NAME, precond=tuple(problem.goals))
    # a pilha de condições abertas é LIFO; a primeira meta fica no topo
    open_conditions = tuple(
        OpenCondition(g, GOAL_STEP) for g in reversed(problem.goals)
    )
    return PartialPlan(
        problem=problem,
        steps=(start, goal),
        orderings=frozenset({(START_STEP, GOAL_STEP)}),
        bindings=BindingSet(),
        links=frozenset(),
        open_conditions=open_conditions,
        next_id=1,
    )


def _clobbers(effect: Literal, condition: Literal, bindings: BindingSet) -> bool:
    return effect.positive != condition.positive and bindings.necessarily_codesignate(
        effect.positive_form(), condition.positive_form()
    )


def find_threats(plan: PartialPlan) -> list[Threat]:
    """Efeitos que necessariamente codesignam com a negação de um vínculo causal."""
    threats: list[Threat] = []
    for link in sorted(plan.links):
        for step in plan.steps:
            t = step.step_id
            if t in (link.producer, link.consumer, START_STEP):
                continue
            if plan.precedes(t, link.producer) or plan.precedes(link.consumer, t):
                continue
            for effect in step.effects:
                if _clobbers(effect, link.condition, plan.bindings):
                    threats.append(Threat(link, t, effect))
    return threats


def detect_flaws(plan: PartialPlan) -> list[Flaw]:
    """Ameaças primeiro; depois condições abertas da mais recente para a mais antiga."""
    flaws: list[Flaw] = list(find_threats(plan))
    flaws.extend(reversed(plan.open_conditions))
    return flaws


# ============================================================================
# Consistência
# ============================================================================


def check_consistency(plan: PartialPlan) -> Violation | None:
    """None quando O é acíclica, B satisfatível e todo vínculo de t_I vale em I."""
    try:
        cycle = nx.find_cycle(plan.ordering_graph)
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        return OrderingCycle(tuple((a, b) for a, b, *_ in cycle))

    bindings = plan.bindings
    violated = bindings.violated_distinction()
    if violated is not None:
        path = bindings.equality_path(violated.left, violated.right)
        return BindingConflict(violated, path)
    clash = bindings.clashing_constants()
    if clash is not None:
        a, b = clash
        distinct = Codesignation.of(a, b, equal=False)
        return BindingConflict(distinct, bindings.equality_path(a, b))

    for link in sorted(plan.links):
        if link.producer != START_STEP:
            continue
        resolved = bindings.resolve(link.condition)
        if resolved.is_ground and resolved not in plan.problem.init:
            return InitContradiction(link, resolved)
    return None


# ============================================================================
# Operadores de refinamento
# ============================================================================


def instantiate_step(
    schema: OperatorSchema, step_id: int
) -> tuple[Step, list[Codesignation]]:
    """Padroniza o esquema com o id do passo e compila equals/not-equals em B."""
    renaming = schema.renaming(step_id)
    effects = tuple(a.substitute(renaming) for a in schema.add) + tuple(
        d.substitute(renaming).negate() for d in schema.delete
    )
    step = Step(
        step_id=step_id,
        name=schema.name,
        args=tuple(renaming[p] for p in schema.params),
        precond=tuple(p.substitute(renaming) for p in schema.precond),
        effects=effects,
    )
    constraints = [
        Codesignation.of(renaming.get(a, a), renaming.get(b, b), equal=True)
        for a, b in schema.equals
    ]
    constraints += [
        Codesignation.of(renaming.get(a, a), renaming.get(b, b), equal=False)
        for a, b in schema.not_equals
    ]
    return step, constraints


def _remove_open(plan: PartialPlan, flaw: OpenCondition) -> tuple[OpenCondition, ...]:
    remaining = list(plan.open_conditions)
    remaining.remove(flaw)
    return tuple(remaining)


def _child(plan: PartialPlan, decision: Decision, **changes) -> Refinement:
    values = {
        "problem": plan.problem,
        "steps": plan.steps,
        "orderings": plan.orderings,
        "bindings": plan.bindings,
        "links": plan.links,
        "open_conditions": plan.open_conditions,
        "next_id": plan.next_id,
    }
    values.update(changes)
    child = PartialPlan(**values)
    return Refinement(decision, child, check_consistency(child))


def _new_step_children(plan: PartialPlan, flaw: OpenCondition) -> list[Refinement]:
    children: list[Refinement] = []
    p = flaw.condition
    sid = plan.next_id
    for schema in plan.problem.domain.schemas:
        step, constraints = instantiate_step(schema, sid)
        for effect in step.effects:
            if not effect.same_shape(p):
                continue
            base = plan.bindings.extend(constraints)
            result = unify(effect, p, base)
            if isinstance(result, UnifyFailure):
                if result.kind != "distinct":
                    continue
                bindings = base.extend(result.pairs[1:])
            else:
                bindings = result
            link = CausalLink(sid, p, flaw.consumer)
            added_orderings = frozenset(
                {(START_STEP, sid), (sid, GOAL_STEP), (sid, flaw.consumer)}
            )
            decision = Decision(
                kind=DecisionKind.NEW_STEP,
                flaw=flaw,
                step=step,
                link=link,
                producer_effect=effect,
                added_orderings=added_orderings,
                added_bindings=bindings.constraints - plan.bindings.constraints,
            )
            children.append(
                _child(
                    plan,
                    decision,
                    steps=plan.steps + (step,),
                    orderings=plan.orderings | added_orderings,
                    bindings=bindings,
                    links=plan.links | {link},
                    open_conditions=_remove_open(plan, flaw)
                    + tuple(OpenCondition(q, sid) for q in step.precond),
                    next_id=sid + 1,
                )
            )
    return children


def _new_link_children(plan: PartialPlan, flaw: OpenCondition) -> list[Refinement]:
    children: list[Refinement] = []
    p = flaw.condition
    linked_from_init = False
    for step in plan.steps:
        if step.step_id == GOAL_STEP:
            continue
        for effect in step.effects:
            if not effect.same_shape(p):
                continue
            result = unify(effect, p, plan.bindings)
            if isinstance(result, UnifyFailure):
                if result.kind != "distinct":
                    continue
                bindings = plan.bindings.extend(result.pairs[1:])
            else:
                bindings = result
            if step.step_id == START_STEP:
                linked_from_init = True
            children.append(_link_child(plan, flaw, step.step_id, effect, bindings))

    resolved = plan.bindings.resolve(p)
    if not linked_from_init and p.positive and resolved.is_ground:
        # tentativa de t_I: filho inconsistente que explica a ausência em I
        children.append(_link_child(plan, flaw, START_STEP, None, plan.bindings))
    return children


def _link_child(
    plan: PartialPlan,
    flaw: OpenCondition,
    producer: int,
    effect: Literal | None,
    bindings: BindingSet,
) -> Refinement:
    link = CausalLink(producer, flaw.condition, flaw.consumer)
    added_orderings = frozenset({(producer, flaw.consumer)}) - plan.orderings
    decision = Decision(
        kind=DecisionKind.NEW_LINK,
        flaw=flaw,
        link=link,
        producer_effect=effect,
        added_orderings=added_orderings,
        added_bindings=bindings.constraints - plan.bindings.constraints,
    )
    return _child(
        plan,
        decision,
        orderings=plan.orderings | added_orderings,
        bindings=bindings,
        links=plan.links | {link},
        open_conditions=_remove_open(plan, flaw),
    )


def _resolution_children(plan: PartialPlan, flaw: Threat) -> list[Refinement]:
    link = flaw.link
    options = (
        (DecisionKind.PROMOTION, (link.consumer, flaw.clobberer)),
        (DecisionKind.DEMOTION, (flaw.clobberer, link.producer)),
    )
    children = []
    for kind, ordering in options:
        decision = Decision(kind=kind, flaw=flaw, added_orderings=frozenset({ordering}))
        children.append(_child(plan, decision, orderings=plan.orderings | {ordering}))
    return children


def refine(plan: PartialPlan, flaw: Flaw) -> list[Refinement]:
    """Todos os filhos de `plan` para `flaw`, inclusive os inconsistentes (marcados).

    Condição aberta: NEW-LINK (passos existentes, t_I incluído) e depois NEW-STEP
    por efeito unificável de cada esquema. Ameaça: PROMOTION (s' ≺ t) e
    DEMOTION (t ≺ s).
    """
    if isinstance(flaw, Threat):
        return _resolution_children(plan, flaw)
    return _new_link_children(plan, flaw) + _new_step_children(plan, flaw)


def rank(plan: PartialPlan, threats: int | None = None) -> int:
    """f = passos (com t_I e t_G) + condições abertas + ameaças."""
    if threats is None:
        threats = len(find_threats(plan))
    return len(plan.steps) + len(plan.open_conditions) + threats


# ============================================================================
# Extração da solução
# ============================================================================


def _ground_residuals(plan: PartialPlan) -> BindingSet:
    """Aterra classes sem constante com a primeira constante compatível em I."""
    bindings = plan.bindings
    init_index = plan.problem.init_by_predicate
    for step in plan.real_steps:
        for arg in step.args:
            if not is_variable(bindings.value(arg)):
                continue
            chosen = None
            for pre in step.precond:
                if arg not in pre.args:
                    continue
                position = pre.args.index(arg)
                for lit in init_index.get(pre.predicate, ()):
                    equal = Codesignation.of(arg, lit.args[position])
                    candidate = bindings.extend((equal,))
                    if (
                        candidate.violated_distinction() is None
                        and candidate.clashing_constants() is None
                    ):
                        chosen = candidate
                        break
                if chosen is not None:
                    break
            if chosen is None:
                raise SolutionExtractionError(
                    f"Variável {arg} do passo {step.step_id} sem aterramento "
                    "consistente"
                )
            bindings = chosen
    return bindings


def linearize(plan: PartialPlan) -> list[int]:
    """Ordem topológica lexicográfica dos passos reais."""
    order = nx.lexicographical_topological_sort(plan.ordering_graph)
    return [s for s in order if s not in (START_STEP, GOAL_STEP)]


def extract_solution(plan: PartialPlan) -> tuple[GroundAction, ...]:
    bindings = _ground_residuals(plan)
    domain = plan.problem.domain
    actions = []
    for step_id in linearize(plan):
        step = plan.step(step_id)
        args = tuple(bindings.value(a) for a in step.args)
        actions.append(GroundAction(domain.schema(step.name), args))
    result = execute(actions, plan.problem.init)
    if isinstance(result, ExecutionFailure):
        raise SolutionExtractionError(f"Linearização não executa: {result}")
    if not entails(result, plan.problem.goals):
        raise SolutionExtractionError("Linearização não atinge as metas")
    return tuple(actions)
