"""Replay ansioso de traços, adaptação com recuperação e métricas de replay."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace

from plan_replay.models.bindings import BindingSet
from plan_replay.models.case import CaseInstance
from plan_replay.models.explanation import CaseFailureReason
from plan_replay.models.literals import (
    Literal,
    is_lifted,
    split_step_variable,
    step_variable,
)
from plan_replay.models.operators import ProblemSpec
from plan_replay.models.plan import (
    GOAL_STEP,
    START_STEP,
    DecisionKind,
    OpenCondition,
    PartialPlan,
    Refinement,
)
from plan_replay.models.replay import (
    AdaptOutcome,
    Failed,
    Recovered,
    Replayed,
    ReplayLog,
    ReplayMetrics,
    Sequenced,
    Skipped,
    SkipReason,
)
from plan_replay.models.search import (
    BudgetExceeded,
    Exhausted,
    SearchLimits,
    SearchNode,
    SearchStats,
    SearchStrategy,
    Solution,
)
from plan_replay.models.trace import DecisionRecord, DecisionType, DerivationTrace
from plan_replay.utils.logging import get_logger

from .lifting import Lifter
from .refinement import find_threats, make_null_plan, refine
from .search import RefinementSearch
from .trace import link_fingerprints

logger = get_logger(__name__)

CONFIRM_MARGIN = 2


# ============================================================================
# Mapeamento traço -> plano
# ============================================================================


@dataclass
class TraceMapping:
    """Ids locais do traço para ids do plano e variáveis generalizadas para termos."""

    steps: dict[int, int] = field(
        default_factory=lambda: {START_STEP: START_STEP, GOAL_STEP: GOAL_STEP}
    )
    terms: dict[str, str] = field(default_factory=dict)

    def step(self, step_id: int) -> int | None:
        return self.steps.get(step_id)


@dataclass(frozen=True)
class ValidDecision:
    refinement: Refinement
    steps: dict[int, int]
    terms: dict[str, str]


@dataclass(frozen=True)
class SkippedDecision:
    reason: SkipReason


class _Unmapped(Exception):
    """Referência a um passo do traço que não foi replicado."""


def _translate(
    literal: Literal, mapping: TraceMapping, created: tuple[int, int] | None = None
) -> Literal:
    def term(value: str) -> str:
        split = split_step_variable(value)
        if split is not None:
            base, step_id = split
            if created is not None and step_id == created[0]:
                return step_variable(base, created[1])
            target = mapping.step(step_id)
            if target is None:
                raise _Unmapped(value)
            return step_variable(base, target)
        if is_lifted(value):
            return mapping.terms.get(value, value)
        return value

    return literal.map_args(term)


def _match(
    pattern: Literal, target: Literal, bindings: BindingSet, terms: Mapping[str, str]
) -> dict[str, str] | None:
    """Casa um literal traduzido com um literal do plano; ?_X livres se ligam."""
    if not pattern.same_shape(target):
        return None
    result = dict(terms)
    for p, t in zip(pattern.args, target.args):
        actual = bindings.value(t)
        if is_lifted(p) and p not in result:
            result[p] = actual
            continue
        if bindings.value(result.get(p, p)) != actual:
            return None
    return result


# ============================================================================
# Validação de decisões
# ============================================================================


def _find_open_condition(
    record: DecisionRecord, plan: PartialPlan, mapping: TraceMapping
) -> tuple[OpenCondition, dict[str, str]] | None:
    consumer = mapping.step(record.open_cond.consumer)
    if consumer is None:
        return None
    pattern = _translate(record.open_cond.condition, mapping)
    for oc in reversed(plan.open_conditions):
        if oc.consumer != consumer:
            continue
        target = plan.bindings.resolve(oc.condition)
        theta = _match(pattern, target, plan.bindings, mapping.terms)
        if theta is not None:
            return oc, theta
    return None


def _validate_new_step(
    record: DecisionRecord,
    plan: PartialPlan,
    flaw: OpenCondition,
    theta: dict[str, str],
    mapping: TraceMapping,
    increased_justification: bool,
) -> ValidDecision | SkippedDecision:
    refinements = refine(plan, flaw)
    if increased_justification:
        extra = link_fingerprints(plan, flaw, refinements) - record.siblings
        if extra:
            logger.debug(f"{record.name} pulado: novos vínculos {sorted(extra)}")
            return SkippedDecision(SkipReason.INCREASED_JUSTIFICATION)

    created = (record.created_step, plan.next_id)
    scoped = TraceMapping(mapping.steps, theta)
    step_pattern = _translate(record.new_step, scoped, created)
    link_pattern = _translate(record.new_link.condition, scoped, created)
    for refinement in refinements:
        decision = refinement.decision
        if decision.kind is not DecisionKind.NEW_STEP or not refinement.consistent:
            continue
        if decision.step.name != record.new_step.predicate:
            continue
        child = refinement.plan.bindings
        matched = _match(step_pattern, decision.step.as_literal(), child, theta)
        if matched is None:
            continue
        target = child.resolve(decision.link.condition)
        matched = _match(link_pattern, target, child, matched)
        if matched is None:
            continue
        steps = dict(mapping.steps)
        steps[record.created_step] = decision.step.step_id
        return ValidDecision(refinement, steps, matched)
    return SkippedDecision(SkipReason.INVALID_PRECONDITION)


def _validate_new_link(
    record: DecisionRecord,
    plan: PartialPlan,
    flaw: OpenCondition,
    theta: dict[str, str],
    mapping: TraceMapping,
) -> ValidDecision | SkippedDecision:
    producer = mapping.step(record.new_link.producer)
    if producer is None:
        return SkippedDecision(SkipReason.INVALID_PRECONDITION)
    pattern = _translate(record.new_link.condition, TraceMapping(mapping.steps, theta))
    for refinement in refine(plan, flaw):
        decision = refinement.decision
        if decision.kind is not DecisionKind.NEW_LINK or not refinement.consistent:
            continue
        if decision.link.producer != producer:
            continue
        child = refinement.plan.bindings
        matched = _match(pattern, child.resolve(decision.link.condition), child, theta)
        if matched is not None:
            return ValidDecision(refinement, dict(mapping.steps), matched)
    return SkippedDecision(SkipReason.INVALID_PRECONDITION)


def _validate_resolution(
    record: DecisionRecord, plan: PartialPlan, mapping: TraceMapping
) -> ValidDecision | SkippedDecision:
    link = record.unsafe_link
    producer, consumer = mapping.step(link.producer), mapping.step(link.consumer)
    clobberer = mapping.step(record.effect[0])
    if None in (producer, consumer, clobberer):
        return SkippedDecision(SkipReason.INVALID_PRECONDITION)
    pattern = _translate(link.condition, mapping)
    for threat in find_threats(plan):
        if (threat.link.producer, threat.link.consumer, threat.clobberer) != (
            producer,
            consumer,
            clobberer,
        ):
            continue
        target = plan.bindings.resolve(threat.link.condition)
        theta = _match(pattern, target, plan.bindings, mapping.terms)
        if theta is None:
            continue
        for refinement in refine(plan, threat):
            if refinement.decision.kind is record.kind and refinement.consistent:
                return ValidDecision(refinement, dict(mapping.steps), theta)
    return SkippedDecision(SkipReason.INVALID_PRECONDITION)


def validate_decision(
    record: DecisionRecord,
    plan: PartialPlan,
    mapping: TraceMapping,
    increased_justification: bool = True,
) -> ValidDecision | SkippedDecision:
    """Valid(refinamento correspondente) ou Skip(motivo) no plano atual."""
    try:
        if record.type is DecisionType.RESOLUTION:
            return _validate_resolution(record, plan, mapping)
        if record.type is not DecisionType.ESTABLISHMENT:
            return SkippedDecision(SkipReason.INVALID_PRECONDITION)
        found = _find_open_condition(record, plan, mapping)
        if found is None:
            return SkippedDecision(SkipReason.INVALID_PRECONDITION)
        flaw, theta = found
        if record.kind is DecisionKind.NEW_STEP:
            return _validate_new_step(
                record, plan, flaw, theta, mapping, increased_justification
            )
        return _validate_new_link(record, plan, flaw, theta, mapping)
    except _Unmapped:
        return SkippedDecision(SkipReason.INVALID_PRECONDITION)


# ============================================================================
# Replay e adaptação
# ============================================================================


def replay(
    traces: Sequence[tuple[DerivationTrace, Mapping[str, str]]],
    problem: ProblemSpec,
    increased_justification: bool = True,
) -> tuple[SearchNode, ReplayLog, list[TraceMapping]]:
    """Replica todos os traços em sequência; devolve o nó esqueleto e o log."""
    node = SearchNode(make_null_plan(problem), serial=1)
    serial = 1
    log = ReplayLog()
    mappings: list[TraceMapping] = []

    for index, (trace, substitution) in enumerate(traces):
        mapping = TraceMapping(terms=dict(substitution))
        for record in trace.decisions:
            result = validate_decision(
                record, node.plan, mapping, increased_justification
            )
            if isinstance(result, SkippedDecision):
                log.entries.append(Skipped(index, record.name, result.reason))
                logger.debug(
                    f"Caso {index} {record.name}: pulado ({result.reason.value})"
                )
                continue
            serial += 1
            refinement = result.refinement
            node = node.child(
                refinement.plan, refinement.decision, serial, replayed=True
            )
            mapping.steps = result.steps
            mapping.terms = result.terms
            log.entries.append(Replayed(index, record.name, serial))
        mappings.append(mapping)

    logger.debug(
        f"Replay: {len(log.replayed)} replicadas, {len(log.skipped)} puladas "
        f"-> {node.plan!r}"
    )
    return node, log, mappings


def replay_metrics(stats: SearchStats, sequenced: bool) -> ReplayMetrics:
    der = stats.replay_on_path / stats.path_length if stats.path_length else 0.0
    rep = stats.replay_on_path / stats.replay_nodes if stats.replay_nodes else 1.0
    return ReplayMetrics(seq=sequenced, der=der, rep=rep)


def instance_lifter(problem: ProblemSpec, instances: Sequence[CaseInstance]) -> Lifter:
    """Inverso da união das substituições dos casos recuperados."""
    merged: dict[str, str] = {}
    for instance in instances:
        for variable, value in instance.substitution:
            merged.setdefault(variable, value)
    return Lifter.inverse_of(problem.domain.constants, merged)


def adapt(
    problem: ProblemSpec,
    instances: Sequence[CaseInstance],
    strategy: SearchStrategy = SearchStrategy.BEST_FIRST,
    limits: SearchLimits | None = None,
    increased_justification: bool = True,
    check_systematicity: bool = False,
    lifter: Lifter | None = None,
) -> tuple[AdaptOutcome, ReplayMetrics]:
    """Replay, extensão e, se a extensão falha, recuperação."""
    if lifter is None:
        lifter = instance_lifter(problem, instances)

    traces = [(inst.case.trace, inst.mapping) for inst in instances]
    skeletal, log, _ = replay(traces, problem, increased_justification)
    engine = RefinementSearch(problem, strategy, limits, check_systematicity, lifter)
    outcome = engine.run(skeletal)

    if isinstance(outcome, Solution):
        if outcome.sequenced:
            result: AdaptOutcome = Sequenced(outcome, outcome.stats)
        else:
            result = Recovered(outcome, outcome.failure_reason, outcome.stats)
    elif isinstance(outcome, Exhausted):
        result = Failed(outcome.reason, outcome.stats)
    elif isinstance(outcome, BudgetExceeded):
        result = Failed(outcome.reason, outcome.stats, budget_exceeded=True)
    else:
        raise TypeError(f"Desfecho inesperado: {outcome!r}")

    sequenced = isinstance(result, Sequenced) and bool(instances)
    metrics = replay_metrics(result.stats, sequenced)
    logger.info(
        f"Adaptação: {type(result).__name__} "
        f"(seq={metrics.seq}, der={metrics.der:.2f}, rep={metrics.rep:.2f})"
    )
    return result, metrics


def confirm_reason(
    problem: ProblemSpec,
    instances: Sequence[CaseInstance],
    reason: CaseFailureReason,
    strategy: SearchStrategy = SearchStrategy.BEST_FIRST,
    limits: SearchLimits | None = None,
    margin: int = CONFIRM_MARGIN,
    lifter: Lifter | None = None,
) -> CaseFailureReason:
    """Refaz a extensão com `margin` passos a mais para uma razão não sólida.

    Se a extensão falha de novo com as mesmas metas e condições, o corte de
    profundidade não entrou na explicação e a razão é devolvida como sólida.
    """
    if reason.sound or margin <= 0 or not instances:
        return reason
    limits = limits or SearchLimits.for_goals(len(problem.goals))
    deeper = replace(limits, step_bound=limits.step_bound + margin)
    if lifter is None:
        lifter = instance_lifter(problem, instances)

    traces = [(inst.case.trace, inst.mapping) for inst in instances]
    skeletal, _, _ = replay(traces, problem)
    engine = RefinementSearch(problem, strategy, deeper, lifter=lifter)
    again = engine.explain_extension(skeletal)
    if again is None or (again.goals, again.conditions) != (
        reason.goals,
        reason.conditions,
    ):
        logger.debug(f"Razão não confirmada com limite {deeper.step_bound}: {again}")
        return reason
    logger.info(f"✓ Razão confirmada com limite {deeper.step_bound}: {reason}")
    return replace(reason, sound=True)
