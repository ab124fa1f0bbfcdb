"""Esquemas de operadores, domínios e problemas."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from .literals import Literal, is_variable, step_variable


@dataclass(frozen=True)
class OperatorSchema:
    """Operador STRIPS com restrições de (não) codesignação nos parâmetros."""

    name: str
    params: tuple[str, ...]
    precond: tuple[Literal, ...] = ()
    add: tuple[Literal, ...] = ()
    delete: tuple[Literal, ...] = ()
    equals: tuple[tuple[str, str], ...] = ()
    not_equals: tuple[tuple[str, str], ...] = ()

    @property
    def constants(self) -> frozenset[str]:
        """Constantes citadas no próprio esquema (ex.: AIRPORT)."""
        literals = (*self.precond, *self.add, *self.delete)
        terms = [a for lit in literals for a in lit.args]
        terms += [t for pair in (*self.equals, *self.not_equals) for t in pair]
        return frozenset(t for t in terms if not is_variable(t))

    def renaming(self, step_id: int) -> dict[str, str]:
        return {p: step_variable(p, step_id) for p in self.params}

    def __repr__(self) -> str:
        return f"<OperatorSchema {self.name} {' '.join(self.params)}>"


@dataclass(frozen=True)
class GroundAction:
    """Instância totalmente aterrada de um esquema."""

    schema: OperatorSchema
    args: tuple[str, ...]

    @cached_property
    def binding(self) -> dict[str, str]:
        return dict(zip(self.schema.params, self.args))

    @property
    def name(self) -> str:
        return self.schema.name

    @property
    def preconditions(self) -> tuple[Literal, ...]:
        return tuple(p.substitute(self.binding) for p in self.schema.precond)

    @property
    def adds(self) -> tuple[Literal, ...]:
        return tuple(a.substitute(self.binding) for a in self.schema.add)

    @property
    def deletes(self) -> tuple[Literal, ...]:
        return tuple(d.substitute(self.binding) for d in self.schema.delete)

    def violated_constraint(self) -> tuple[str, str] | None:
        """Primeiro par equals/not-equals violado pelos argumentos, se houver."""
        value = self.binding.get
        for a, b in self.schema.equals:
            if value(a, a) != value(b, b):
                return (a, b)
        for a, b in self.schema.not_equals:
            if value(a, a) == value(b, b):
                return (a, b)
        return None

    def __str__(self) -> str:
        return f"({' '.join((self.name, *self.args))})"

    def __repr__(self) -> str:
        return f"<GroundAction {self}>"


@dataclass(frozen=True)
class Domain:
    """Conjunto nomeado de esquemas."""

    name: str
    schemas: tuple[OperatorSchema, ...]

    @cached_property
    def by_name(self) -> dict[str, OperatorSchema]:
        return {s.name: s for s in self.schemas}

    def schema(self, name: str) -> OperatorSchema:
        return self.by_name[name]

    @cached_property
    def achievable_predicates(self) -> frozenset[str]:
        return frozenset(a.predicate for s in self.schemas for a in s.add)

    @cached_property
    def constants(self) -> frozenset[str]:
        """Constantes do domínio; nunca são generalizadas em variáveis."""
        return frozenset(c for s in self.schemas for c in s.constants)

    def is_filter(self, literal: Literal) -> bool:
        """Condição de filtro: predicado que nenhum operador adiciona."""
        return literal.predicate not in self.achievable_predicates

    def __repr__(self) -> str:
        return f"<Domain {self.name} schemas={len(self.schemas)}>"


@dataclass(frozen=True)
class ProblemSpec:
    """Problema ⟨I, G, A⟩ com estado inicial fechado."""

    name: str
    domain: Domain
    init: frozenset[Literal]
    goals: tuple[Literal, ...] = field(default_factory=tuple)

    @cached_property
    def init_by_predicate(self) -> dict[str, tuple[Literal, ...]]:
        index: dict[str, list[Literal]] = {}
        for lit in sorted(self.init):
            index.setdefault(lit.predicate, []).append(lit)
        return {k: tuple(v) for k, v in index.items()}

    @property
    def filter_conditions(self) -> tuple[Literal, ...]:
        return tuple(lit for lit in sorted(self.init) if self.domain.is_filter(lit))

    def with_goals(self, goals: tuple[Literal, ...] | list[Literal]) -> ProblemSpec:
        return replace(self, goals=tuple(goals))

    def __repr__(self) -> str:
        return (
            f"<ProblemSpec {self.name} domain={self.domain.name} "
            f"init={len(self.init)} goals={len(self.goals)}>"
        )
