"""Extração, generalização e footprint de traços de derivação."""

from __future__ import annotations

from collections.abc import Iterable

from plan_replay.errors import PlanReplayError
from plan_replay.models.literals import (
    LIFTED_PREFIX,
    Literal,
    positional_pattern,
    split_step_variable,
    step_variable,
)
from plan_replay.models.plan import (
    GOAL_STEP,
    START_STEP,
    CausalLink,
    Decision,
    DecisionKind,
    OpenCondition,
    PartialPlan,
    Refinement,
    Threat,
)
from plan_replay.models.search import SearchNode
from plan_replay.models.trace import (
    START_RECORD,
    DecisionRecord,
    DecisionType,
    DerivationTrace,
    Fingerprint,
)
from plan_replay.utils.logging import get_logger

from .lifting import Lifter
from .refinement import refine

logger = get_logger(__name__)


# ============================================================================
# Extração
# ============================================================================


def link_fingerprints(
    plan: PartialPlan, flaw: OpenCondition, refinements: list[Refinement] | None = None
) -> frozenset[Fingerprint]:
    """Produtores NEW-LINK consistentes disponíveis para a condição aberta."""
    if refinements is None:
        refinements = refine(plan, flaw)
    prints = set()
    for refinement in refinements:
        decision = refinement.decision
        if decision.kind is not DecisionKind.NEW_LINK or not refinement.consistent:
            continue
        producer = plan.step(decision.link.producer)
        effect = plan.bindings.resolve(decision.producer_effect)
        prints.add((producer.name, positional_pattern(effect)))
    return frozenset(prints)


def make_record(
    name: str, parent: PartialPlan, child: PartialPlan, decision: Decision
) -> DecisionRecord:
    """Registro com os literais resolvidos no momento da decisão."""
    flaw = decision.flaw
    if isinstance(flaw, Threat):
        before = parent.bindings
        return DecisionRecord(
            name=name,
            type=DecisionType.RESOLUTION,
            kind=decision.kind,
            unsafe_link=CausalLink(
                flaw.link.producer,
                before.resolve(flaw.link.condition),
                flaw.link.consumer,
            ),
            effect=(flaw.clobberer, before.resolve(flaw.effect)),
        )

    after = child.bindings
    open_cond = OpenCondition(parent.bindings.resolve(flaw.condition), flaw.consumer)
    link = decision.link
    new_link = CausalLink(link.producer, after.resolve(link.condition), link.consumer)
    new_step = None
    siblings: frozenset[Fingerprint] = frozenset()
    if decision.kind is DecisionKind.NEW_STEP:
        step = decision.step
        new_step = Literal(step.name, tuple(after.value(a) for a in step.args))
        siblings = link_fingerprints(parent, flaw)
    return DecisionRecord(
        name=name,
        type=DecisionType.ESTABLISHMENT,
        kind=decision.kind,
        new_step=new_step,
        new_link=new_link,
        open_cond=open_cond,
        siblings=siblings,
    )


def trace_footprint(records: Iterable[DecisionRecord]) -> tuple[Literal, ...]:
    conditions = {
        r.new_link.condition
        for r in records
        if r.new_link is not None and r.new_link.producer == START_STEP
    }
    return tuple(sorted(conditions))


def extract_trace(node: SearchNode) -> DerivationTrace:
    """Decisões da raiz até `node`, em ordem, com anotações de irmãos."""
    path = node.path()
    records = [START_RECORD]
    for index, current in enumerate(path[1:], start=2):
        parent = current.parent.plan
        records.append(
            make_record(f"G{index}", parent, current.plan, current.decision)
        )
    return DerivationTrace(
        records=tuple(records),
        goals=tuple(node.plan.problem.goals),
        footprint=trace_footprint(records),
    )


# ============================================================================
# Generalização (lift)
# ============================================================================


def _establishments(trace: DerivationTrace) -> list[DecisionRecord]:
    return [r for r in trace.records if r.type is DecisionType.ESTABLISHMENT]


def _relevant_records(
    trace: DerivationTrace, keep_goals: set[Literal]
) -> tuple[set[str], set[int], list[Literal]]:
    """Fecho de dependência: registros e passos necessários às metas mantidas."""
    establishments = _establishments(trace)
    creators = {r.created_step: r for r in establishments if r.created_step is not None}
    kept: set[str] = set()
    needed: set[int] = set()
    goals: list[Literal] = [
        r.open_cond.condition
        for r in establishments
        if r.open_cond.consumer == GOAL_STEP and r.open_cond.condition in keep_goals
    ]

    changed = True
    while changed:
        changed = False
        for record in establishments:
            consumer = record.open_cond.consumer
            wanted = consumer in needed or (
                consumer == GOAL_STEP and record.open_cond.condition in goals
            )
            if not wanted or record.name in kept:
                continue
            kept.add(record.name)
            changed = True
            producer = record.new_link.producer
            if producer == START_STEP or producer in needed:
                continue
            creator = creators.get(producer)
            if creator is None:
                raise PlanReplayError(
                    f"Passo {producer} usado antes de ser criado no traço"
                )
            needed.add(producer)
            kept.add(creator.name)
            if creator.open_cond.consumer == GOAL_STEP:
                if creator.open_cond.condition not in goals:
                    goals.append(creator.open_cond.condition)
            else:
                needed.add(creator.open_cond.consumer)

    linked = {
        (r.new_link.producer, r.new_link.consumer, r.new_link.condition.predicate)
        for r in establishments
        if r.name in kept
    }
    alive = needed | {START_STEP, GOAL_STEP}
    for record in trace.records:
        if record.type is not DecisionType.RESOLUTION:
            continue
        link = record.unsafe_link
        if (
            link.producer in alive
            and link.consumer in alive
            and record.effect[0] in needed
            and (link.producer, link.consumer, link.condition.predicate) in linked
        ):
            kept.add(record.name)
    return kept, needed, goals


def _step_renamer(renumber: dict[int, int]):
    def rename(term: str) -> str:
        split = split_step_variable(term)
        if split is None:
            return term
        base, step_id = split
        if step_id in renumber:
            return step_variable(base, renumber[step_id])
        return f"{LIFTED_PREFIX}{base.lstrip('?')}{step_id}"

    return rename


def _rewrite(record: DecisionRecord, name: str, term, step) -> DecisionRecord:
    def literal(lit: Literal | None) -> Literal | None:
        if lit is None:
            return None
        return lit.map_args(term)

    def link(value: CausalLink | None) -> CausalLink | None:
        if value is None:
            return None
        return CausalLink(
            step(value.producer), literal(value.condition), step(value.consumer)
        )

    open_cond = None
    if record.open_cond is not None:
        oc = record.open_cond
        open_cond = OpenCondition(literal(oc.condition), step(oc.consumer))
    effect = None
    if record.effect is not None:
        effect = (step(record.effect[0]), literal(record.effect[1]))
    return DecisionRecord(
        name=name,
        type=record.type,
        kind=record.kind,
        new_step=literal(record.new_step),
        new_link=link(record.new_link),
        open_cond=open_cond,
        unsafe_link=link(record.unsafe_link),
        effect=effect,
        siblings=record.siblings,
    )


def lift(
    trace: DerivationTrace, keep_goals: Iterable[Literal], lifter: Lifter | None = None
) -> DerivationTrace:
    """Mantém só as decisões relevantes às metas, renumera e generaliza constantes."""
    lifter = lifter or Lifter()
    keep = set(keep_goals)
    keep |= set(lifter.literals(keep))
    kept, needed, goals = _relevant_records(trace, keep)

    renumber = {old: new for new, old in enumerate(sorted(needed), start=1)}
    rename_step_var = _step_renamer(renumber)

    def term(value: str) -> str:
        return lifter.term(rename_step_var(value))

    def step(step_id: int) -> int:
        return renumber.get(step_id, step_id)

    records = [START_RECORD]
    for record in trace.records:
        if record.name in kept and record.type is not DecisionType.START_NODE:
            records.append(_rewrite(record, f"G{len(records) + 1}", term, step))

    lifted_goals = tuple(dict.fromkeys(lifter.literal(g) for g in goals))
    lifted = DerivationTrace(
        records=tuple(records),
        goals=lifted_goals,
        footprint=trace_footprint(records),
    )
    logger.debug(
        f"Traço generalizado: {len(trace.records)} -> {len(records)} registros"
    )
    return lifted


def footprint(
    trace: DerivationTrace, lifter: Lifter | None = None
) -> tuple[Literal, ...]:
    """Condições dos vínculos de t_I, generalizadas."""
    lifter = lifter or Lifter()
    return tuple(sorted(set(lifter.literals(trace_footprint(trace.records)))))
