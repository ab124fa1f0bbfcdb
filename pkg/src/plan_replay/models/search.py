"""Tipos da busca de refinamento: limites, nós, estatísticas e desfechos."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .explanation import CaseFailureReason
from .operators import GroundAction
from .plan import Decision, PartialPlan
from .trace import DerivationTrace

DEFAULT_NODE_BUDGET = 50_000


class SearchStrategy(str, Enum):
    BEST_FIRST = "best-first"
    DFS = "dfs"
    IDDFS = "iddfs"


@dataclass(frozen=True)
class SearchLimits:
    """Limites de uma busca. `time_budget` em segundos; None desativa."""

    step_bound: int
    node_budget: int = DEFAULT_NODE_BUDGET
    time_budget: float | None = None

    def __post_init__(self) -> None:
        if self.step_bound < 1:
            raise ValueError(f"step_bound deve ser >= 1 (recebido {self.step_bound})")
        if self.node_budget < 1:
            raise ValueError(f"node_budget deve ser >= 1 (recebido {self.node_budget})")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget deve ser positivo")

    @classmethod
    def for_goals(
        cls,
        n_goals: int,
        node_budget: int = DEFAULT_NODE_BUDGET,
        time_budget: float | None = None,
        step_bound: int | None = None,
    ) -> SearchLimits:
        """Sem `step_bound`, usa 3 passos mais 4 por meta."""
        bound = step_bound if step_bound is not None else 3 + 4 * max(1, n_goals)
        return cls(bound, node_budget, time_budget)


@dataclass(eq=False)
class SearchNode:
    """Nó da árvore de refinamento; `replayed` marca nós produzidos por replay."""

    plan: PartialPlan
    parent: SearchNode | None = None
    decision: Decision | None = None
    replayed: bool = False
    serial: int = 0
    depth: int = 0

    def child(
        self, plan: PartialPlan, decision: Decision, serial: int, replayed: bool = False
    ) -> SearchNode:
        return SearchNode(plan, self, decision, replayed, serial, self.depth + 1)

    def path(self) -> list[SearchNode]:
        """Nós da raiz até este, inclusive."""
        chain: list[SearchNode] = []
        node: SearchNode | None = self
        while node is not None:
            chain.append(node)
            node = node.parent
        return chain[::-1]

    def __repr__(self) -> str:
        mark = " replayed" if self.replayed else ""
        return f"<SearchNode #{self.serial} depth={self.depth}{mark} {self.plan!r}>"


@dataclass
class SearchStats:
    nodes_visited: int = 0
    path_length: int = 0
    replay_nodes: int = 0
    replay_on_path: int = 0
    depth_limit_leaves: int = 0
    wall_time: float = 0.0


@dataclass(frozen=True)
class Solution:
    node: SearchNode
    actions: tuple[GroundAction, ...]
    trace: DerivationTrace
    stats: SearchStats = field(compare=False)
    sequenced: bool = False
    failure_reason: CaseFailureReason | None = None

    @property
    def plan(self) -> PartialPlan:
        return self.node.plan

    @property
    def length(self) -> int:
        return len(self.actions)


@dataclass(frozen=True)
class Exhausted:
    reason: CaseFailureReason | None
    stats: SearchStats = field(compare=False)


@dataclass(frozen=True)
class BudgetExceeded:
    stats: SearchStats = field(compare=False)
    reason: CaseFailureReason | None = None


SearchOutcome = Union[Solution, Exhausted, BudgetExceeded]
