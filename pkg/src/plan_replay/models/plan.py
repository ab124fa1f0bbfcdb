"""Plano parcial ⟨S, O, B, L, E, C⟩ e os objetos que o refinam."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Union

import networkx as nx

from .bindings import BindingSet, Codesignation
from .literals import Literal
from .operators import ProblemSpec

# ============================================================================
# Configurações e Constantes
# ============================================================================

START_STEP = 0
GOAL_STEP = -1
START_NAME = "START"
GOAL_NAME = "GOAL"


def step_label(step_id: int) -> str:
    return GOAL_NAME if step_id == GOAL_STEP else str(step_id)


def parse_step_label(label: str) -> int:
    return GOAL_STEP if label == GOAL_NAME else int(label)


# ============================================================================
# Componentes do plano
# ============================================================================


@dataclass(frozen=True, order=True)
class Step:
    """Passo do plano: instância de esquema com variáveis renomeadas."""

    step_id: int
    name: str
    args: tuple[str, ...] = ()
    precond: tuple[Literal, ...] = ()
    effects: tuple[Literal, ...] = ()

    @property
    def is_dummy(self) -> bool:
        return self.step_id in (START_STEP, GOAL_STEP)

    def as_literal(self) -> Literal:
        return Literal(self.name, self.args)

    def __repr__(self) -> str:
        return f"<Step {self.step_id} ({' '.join((self.name, *self.args))})>"


@dataclass(frozen=True, order=True)
class CausalLink:
    producer: int
    condition: Literal
    consumer: int

    def __str__(self) -> str:
        return (
            f"({step_label(self.producer)} {self.condition} "
            f"{step_label(self.consumer)})"
        )


@dataclass(frozen=True, order=True)
class OpenCondition:
    condition: Literal
    consumer: int

    def __str__(self) -> str:
        return f"({self.condition} {step_label(self.consumer)})"


@dataclass(frozen=True, order=True)
class Threat:
    """Efeito ⟨clobberer, ¬p'⟩ que pode desfazer `link`."""

    link: CausalLink
    clobberer: int
    effect: Literal


Flaw = Union[OpenCondition, Threat]


class DecisionKind(str, Enum):
    NEW_STEP = "NEW-STEP"
    NEW_LINK = "NEW-LINK"
    PROMOTION = "PROMOTION"
    DEMOTION = "DEMOTION"

    @property
    def is_establishment(self) -> bool:
        return self in (DecisionKind.NEW_STEP, DecisionKind.NEW_LINK)


@dataclass(frozen=True)
class Decision:
    """Uma aplicação de operador de refinamento e as restrições adicionadas."""

    kind: DecisionKind
    flaw: Flaw
    step: Step | None = None
    link: CausalLink | None = None
    producer_effect: Literal | None = None
    added_orderings: frozenset[tuple[int, int]] = frozenset()
    added_bindings: frozenset[Codesignation] = frozenset()

    @property
    def added_open_conditions(self) -> frozenset[OpenCondition]:
        if self.step is None:
            return frozenset()
        return frozenset(OpenCondition(p, self.step.step_id) for p in self.step.precond)

    def __repr__(self) -> str:
        detail = self.link or self.added_orderings
        return f"<Decision {self.kind.value} {detail}>"


# ============================================================================
# Violações de consistência
# ============================================================================


@dataclass(frozen=True)
class OrderingCycle:
    edges: tuple[tuple[int, int], ...]

    @property
    def pair(self) -> tuple[int, int]:
        return self.edges[0]


@dataclass(frozen=True)
class BindingConflict:
    distinction: Codesignation
    path: tuple[Codesignation, ...]


@dataclass(frozen=True)
class InitContradiction:
    link: CausalLink
    literal: Literal


Violation = Union[OrderingCycle, BindingConflict, InitContradiction]


# ============================================================================
# Plano parcial
# ============================================================================


@dataclass(frozen=True)
class PartialPlan:
    """Plano parcial persistente; filhos nunca mutam o pai."""

    problem: ProblemSpec = field(compare=False, repr=False)
    steps: tuple[Step, ...]
    orderings: frozenset[tuple[int, int]]
    bindings: BindingSet
    links: frozenset[CausalLink]
    open_conditions: tuple[OpenCondition, ...]
    next_id: int = 1

    @cached_property
    def step_table(self) -> dict[int, Step]:
        return {s.step_id: s for s in self.steps}

    def step(self, step_id: int) -> Step:
        return self.step_table[step_id]

    @property
    def real_steps(self) -> tuple[Step, ...]:
        return tuple(s for s in self.steps if not s.is_dummy)

    @property
    def step_count(self) -> int:
        """Passos reais (sem t_I e t_G); é a grandeza limitada pelo step-bound."""
        return len(self.steps) - 2

    @property
    def effects(self) -> frozenset[tuple[int, Literal]]:
        return frozenset((s.step_id, e) for s in self.steps for e in s.effects)

    @cached_property
    def ordering_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(s.step_id for s in self.steps)
        graph.add_edges_from(self.orderings)
        return graph

    @cached_property
    def _descendants(self) -> dict[int, frozenset[int]]:
        graph = self.ordering_graph
        if not nx.is_directed_acyclic_graph(graph):
            return {n: frozenset(nx.descendants(graph, n)) for n in graph.nodes}
        closure = nx.transitive_closure_dag(graph)
        return {n: frozenset(closure.successors(n)) for n in closure.nodes}

    def precedes(self, a: int, b: int) -> bool:
        """a ≺ b no fecho transitivo de O."""
        return b in self._descendants.get(a, frozenset())

    def canonical_key(self) -> tuple:
        return (
            tuple((s.step_id, s.name, s.args) for s in self.steps),
            tuple(sorted(self.orderings)),
            self.bindings.canonical(),
            tuple(sorted(self.links)),
        )

    def __repr__(self) -> str:
        return (
            f"<PartialPlan steps={self.step_count} links={len(self.links)} "
            f"open={len(self.open_conditions)}>"
        )


@dataclass(frozen=True)
class Refinement:
    """Filho produzido por `refine`; filhos inconsistentes carregam a violação."""

    decision: Decision
    plan: PartialPlan
    violation: Violation | None = None

    @property
    def consistent(self) -> bool:
        return self.violation is None
