"""Execução STRIPS de sequências de ações aterradas."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from plan_replay.models.literals import Literal
from plan_replay.models.operators import GroundAction


@dataclass(frozen=True)
class ExecutionFailure:
    """Primeiro passo (1-based) cuja precondição ou restrição falha."""

    index: int
    action: GroundAction
    missing: tuple[Literal, ...] = ()
    constraint: tuple[str, str] | None = None

    def __str__(self) -> str:
        if self.constraint is not None:
            a, b = self.constraint
            return f"passo {self.index} {self.action}: restrição ({a} {b}) violada"
        missing = " ".join(str(m) for m in self.missing)
        return f"passo {self.index} {self.action}: precondições ausentes {missing}"


def holds(literal: Literal, state: frozenset[Literal]) -> bool:
    """Mundo fechado: um literal negativo vale sse sua forma positiva está ausente."""
    if literal.positive:
        return literal in state
    return literal.positive_form() not in state


def apply(action: GroundAction, state: frozenset[Literal]) -> frozenset[Literal]:
    """Remove os deletes e depois acrescenta os adds."""
    return (state - frozenset(action.deletes)) | frozenset(action.adds)


def execute(
    actions: Sequence[GroundAction], init: Iterable[Literal]
) -> frozenset[Literal] | ExecutionFailure:
    state = frozenset(init)
    for index, action in enumerate(actions, start=1):
        constraint = action.violated_constraint()
        if constraint is not None:
            return ExecutionFailure(index, action, constraint=constraint)
        missing = tuple(p for p in action.preconditions if not holds(p, state))
        if missing:
            return ExecutionFailure(index, action, missing=missing)
        state = apply(action, state)
    return state


def entails(state: frozenset[Literal], goals: Iterable[Literal]) -> bool:
    return all(holds(g, state) for g in goals)
