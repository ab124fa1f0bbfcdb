"""Explicações de falha e razões de falha de caso."""

from __future__ import annotations

from dataclasses import dataclass

from .bindings import Codesignation
from .literals import Literal
from .plan import CausalLink, OpenCondition


@dataclass(frozen=True)
class FailureExplanation:
    """Projeção ⟨S_e, O_e, B_e, L_e, E_e, C_e⟩ de um plano."""

    steps: frozenset[int] = frozenset()
    orderings: frozenset[tuple[int, int]] = frozenset()
    bindings: frozenset[Codesignation] = frozenset()
    links: frozenset[CausalLink] = frozenset()
    effects: frozenset[tuple[int, Literal]] = frozenset()
    open_conditions: frozenset[OpenCondition] = frozenset()

    @property
    def is_empty(self) -> bool:
        return not (
            self.steps
            or self.orderings
            or self.bindings
            or self.links
            or self.effects
            or self.open_conditions
        )

    def union(self, other: FailureExplanation) -> FailureExplanation:
        return FailureExplanation(
            steps=self.steps | other.steps,
            orderings=self.orderings | other.orderings,
            bindings=self.bindings | other.bindings,
            links=self.links | other.links,
            effects=self.effects | other.effects,
            open_conditions=self.open_conditions | other.open_conditions,
        )

    def __repr__(self) -> str:
        return (
            f"<FailureExplanation S={len(self.steps)} O={len(self.orderings)} "
            f"B={len(self.bindings)} L={len(self.links)} E={len(self.effects)} "
            f"C={len(self.open_conditions)}>"
        )


@dataclass(frozen=True)
class CaseFailureReason:
    """Razão ⟨C, E⟩ na raiz: metas que interagem e condições do estado inicial.

    `goals` e `conditions` ficam ordenados para que a serialização seja estável.
    """

    goals: tuple[Literal, ...]
    conditions: tuple[Literal, ...]
    sound: bool = True

    @property
    def variables(self) -> frozenset[str]:
        literals = (*self.goals, *self.conditions)
        return frozenset(v for lit in literals for v in lit.variables)

    def __str__(self) -> str:
        goals = " ".join(f"({g} GOAL)" for g in self.goals)
        conds = " ".join(f"(0 {c})" for c in self.conditions)
        return f"C = {{{goals}}} E = {{{conds}}}"

    def __repr__(self) -> str:
        return (
            f"<CaseFailureReason goals={len(self.goals)} "
            f"conditions={len(self.conditions)} sound={self.sound}>"
        )
