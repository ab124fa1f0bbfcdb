"""Aprendizado por explicação: explicações de folha, regressão, razões de falha."""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from plan_replay.models.explanation import CaseFailureReason, FailureExplanation
from plan_replay.models.literals import (
    Literal,
    is_lifted,
    is_variable,
    split_step_variable,
)
from plan_replay.models.operators import ProblemSpec
from plan_replay.models.plan import (
    GOAL_STEP,
    START_STEP,
    BindingConflict,
    Decision,
    InitContradiction,
    OpenCondition,
    OrderingCycle,
    PartialPlan,
    Threat,
    Violation,
)
from plan_replay.models.search import SearchNode
from plan_replay.utils.logging import get_logger

from .lifting import Lifter
from .matching import match_all, match_injective, match_literal

logger = get_logger(__name__)


# ============================================================================
# Explicações de folha
# ============================================================================


def explain_leaf(plan: PartialPlan, violation: Violation | None) -> FailureExplanation:
    """Conjunto mínimo de restrições do plano que justifica a inconsistência."""
    if violation is None:
        raise ValueError("Plano consistente não tem explicação de falha")
    if isinstance(violation, InitContradiction):
        return FailureExplanation(
            links=frozenset({violation.link}),
            effects=frozenset({(START_STEP, violation.literal.negate())}),
        )
    if isinstance(violation, OrderingCycle):
        return FailureExplanation(orderings=frozenset(violation.edges))
    if isinstance(violation, BindingConflict):
        bindings = set(violation.path)
        if violation.distinction in plan.bindings.constraints:
            bindings.add(violation.distinction)
        return FailureExplanation(bindings=frozenset(bindings))
    raise TypeError(f"Violação desconhecida: {violation!r}")


def explain_dead_end(plan: PartialPlan, flaw: OpenCondition) -> FailureExplanation:
    """Condição aberta sem produtor: ⟨C_e = {⟨p, s⟩}, E_e = {⟨t_I, ¬p⟩}⟩."""
    resolved = plan.bindings.resolve(flaw.condition)
    return FailureExplanation(
        open_conditions=frozenset({flaw}),
        effects=frozenset({(START_STEP, resolved.negate())}),
    )


# ============================================================================
# Regressão
# ============================================================================


def decision_precondition(decision: Decision) -> FailureExplanation:
    """Restrições do pai que a decisão exige (seu 'precondition')."""
    flaw = decision.flaw
    if isinstance(flaw, Threat):
        return FailureExplanation(
            links=frozenset({flaw.link}),
            effects=frozenset({(flaw.clobberer, flaw.effect)}),
        )
    return FailureExplanation(open_conditions=frozenset({flaw}))


def regress(expl: FailureExplanation, decision: Decision) -> FailureExplanation:
    """Leva a explicação do filho para o pai, restrição por restrição."""
    new_step = decision.step.step_id if decision.step is not None else None

    steps = frozenset(s for s in expl.steps if s != new_step)
    orderings = expl.orderings - decision.added_orderings
    bindings = expl.bindings - decision.added_bindings
    links = frozenset(link for link in expl.links if link != decision.link)
    effects = frozenset(e for e in expl.effects if e[0] != new_step)
    open_conditions = expl.open_conditions - decision.added_open_conditions

    remaining = FailureExplanation(
        steps, orderings, bindings, links, effects, open_conditions
    )
    if remaining == expl:
        return expl
    return remaining.union(decision_precondition(decision))


def regress_path(expl: FailureExplanation, node: SearchNode) -> FailureExplanation:
    """Regride pelas decisões de `node` até o plano nulo."""
    current: SearchNode | None = node
    while current is not None and current.decision is not None:
        expl = regress(expl, current.decision)
        current = current.parent
    return expl


# ============================================================================
# Razão de falha do caso
# ============================================================================


def _rename_free_variables(literals: Iterable[Literal]) -> dict[str, str]:
    """Variáveis de passo viram nomes curtos (?P.5 -> ?P)."""
    renaming: dict[str, str] = {}
    taken: set[str] = set()
    for lit in literals:
        for arg in lit.args:
            if not is_variable(arg) or is_lifted(arg) or arg in renaming:
                continue
            split = split_step_variable(arg)
            base = split[0] if split else arg
            name, counter = base, 2
            while name in taken:
                name, counter = f"{base}{counter}", counter + 1
            taken.add(name)
            renaming[arg] = name
    return renaming


def build_case_failure_reason(
    explanations: Iterable[FailureExplanation],
    depth_limited: bool,
    lifter: Lifter | None = None,
) -> CaseFailureReason:
    """União componente a componente das explicações regredidas até a raiz."""
    explanations = list(explanations)
    if not explanations:
        raise ValueError("Nenhuma explicação para compor a razão de falha")
    combined = explanations[0]
    for expl in explanations[1:]:
        combined = combined.union(expl)

    goals = {
        oc.condition for oc in combined.open_conditions if oc.consumer == GOAL_STEP
    }
    conditions = {lit for step, lit in combined.effects if step == START_STEP}
    if lifter is not None:
        goals = set(lifter.literals(goals))
        conditions = set(lifter.literals(conditions))
    renaming = _rename_free_variables(sorted(goals | conditions))
    reason = CaseFailureReason(
        goals=tuple(sorted(g.substitute(renaming) for g in goals)),
        conditions=tuple(sorted(c.substitute(renaming) for c in conditions)),
        sound=not depth_limited,
    )
    logger.debug(f"Razão de falha construída: {reason}")
    return reason


def _negative_holds(
    condition: Literal, init: frozenset[Literal], theta: Mapping[str, str]
) -> bool:
    """Mundo fechado; variáveis não ligadas são lidas universalmente."""
    positive = condition.positive_form().substitute(theta)
    if positive.is_ground:
        return positive not in init
    return not any(match_literal(positive, fact, {}) is not None for fact in init)


def find_reason_witness(
    reason: CaseFailureReason, problem: ProblemSpec, theta: Mapping[str, str]
) -> dict[str, str] | None:
    """Extensão de `theta` que torna a razão verdadeira no problema, se existir."""
    positives = [c for c in reason.conditions if c.positive]
    negatives = [c for c in reason.conditions if not c.positive]
    for goal_theta, _ in match_injective(reason.goals, problem.goals, theta):
        for full in match_all(positives, problem.init, goal_theta):
            if all(_negative_holds(c, problem.init, full) for c in negatives):
                return full
    return None


def reason_holds(
    reason: CaseFailureReason, problem: ProblemSpec, theta: Mapping[str, str]
) -> bool:
    return find_reason_witness(reason, problem, theta) is not None


# ============================================================================
# Coletor usado pela busca
# ============================================================================


class ExplanationCollector:
    """Acumula explicações de folhas analíticas já regredidas até a raiz."""

    def __init__(self) -> None:
        self.explanations: set[FailureExplanation] = set()
        self.depth_limited = False

    def record_inconsistent(
        self,
        parent: SearchNode,
        decision: Decision,
        plan: PartialPlan,
        violation: Violation,
    ) -> None:
        leaf = explain_leaf(plan, violation)
        self.explanations.add(regress_path(regress(leaf, decision), parent))

    def record_dead_end(self, node: SearchNode, flaw: OpenCondition) -> None:
        self.explanations.add(regress_path(explain_dead_end(node.plan, flaw), node))

    def record_depth_limit(self) -> None:
        self.depth_limited = True

    def build(self, lifter: Lifter | None = None) -> CaseFailureReason | None:
        if not self.explanations:
            return None
        return build_case_failure_reason(self.explanations, self.depth_limited, lifter)

    def __len__(self) -> int:
        return len(self.explanations)
