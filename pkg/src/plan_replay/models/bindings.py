"""Conjunto de restrições de codesignação (B)."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from .literals import Literal, is_variable


@dataclass(frozen=True, order=True)
class Codesignation:
    """Restrição binária: `left` e `right` (não) designam o mesmo objeto."""

    left: str
    right: str
    equal: bool = True

    @classmethod
    def of(cls, a: str, b: str, equal: bool = True) -> Codesignation:
        left, right = sorted((a, b))
        return cls(left, right, equal)

    def __str__(self) -> str:
        op = "=" if self.equal else "!="
        return f"({self.left} {op} {self.right})"


@dataclass(frozen=True)
class UnifyFailure:
    """Falha de unificação: 'predicate', 'clash' ou 'distinct'."""

    kind: str
    pairs: tuple[Codesignation, ...] = ()


@dataclass(frozen=True)
class BindingSet:
    """Restrições de codesignação explícitas; classes derivadas sob demanda."""

    constraints: frozenset[Codesignation] = frozenset()

    @cached_property
    def _classes(self) -> dict[str, frozenset[str]]:
        graph = nx.Graph()
        graph.add_edges_from((c.left, c.right) for c in self.constraints if c.equal)
        index: dict[str, frozenset[str]] = {}
        for component in nx.connected_components(graph):
            members = frozenset(component)
            for term in members:
                index[term] = members
        return index

    @property
    def equalities(self) -> frozenset[Codesignation]:
        return frozenset(c for c in self.constraints if c.equal)

    @property
    def distinctions(self) -> frozenset[Codesignation]:
        return frozenset(c for c in self.constraints if not c.equal)

    def find(self, term: str) -> frozenset[str]:
        return self._classes.get(term, frozenset((term,)))

    def codesignate(self, a: str, b: str) -> bool:
        return a == b or b in self.find(a)

    def value(self, term: str) -> str:
        """Constante da classe do termo, ou a menor variável da classe."""
        members = self.find(term)
        constants = sorted(t for t in members if not is_variable(t))
        if constants:
            return constants[0]
        return min(members)

    def resolve(self, literal: Literal) -> Literal:
        return literal.map_args(self.value)

    def necessarily_codesignate(self, p: Literal, q: Literal) -> bool:
        """Mesmo predicado e cada par de argumentos na mesma classe."""
        return (
            p.predicate == q.predicate
            and p.arity == q.arity
            and all(self.codesignate(a, b) for a, b in zip(p.args, q.args))
        )

    def extend(self, constraints: Iterable[Codesignation]) -> BindingSet:
        """Acrescenta restrições sem verificar satisfatibilidade."""
        added = frozenset(constraints) - self.constraints
        if not added:
            return self
        return BindingSet(self.constraints | added)

    def violated_distinction(self) -> Codesignation | None:
        for c in sorted(self.distinctions):
            if self.codesignate(c.left, c.right):
                return c
        return None

    def clashing_constants(self) -> tuple[str, str] | None:
        for members in {id(m): m for m in self._classes.values()}.values():
            constants = sorted(t for t in members if not is_variable(t))
            if len(constants) > 1:
                return constants[0], constants[1]
        return None

    def equality_path(self, a: str, b: str) -> tuple[Codesignation, ...]:
        """Cadeia mínima de igualdades explícitas que liga `a` a `b`."""
        graph = nx.Graph()
        graph.add_edges_from((c.left, c.right) for c in self.equalities)
        nodes = nx.shortest_path(graph, a, b)
        return tuple(Codesignation.of(x, y) for x, y in zip(nodes, nodes[1:]))

    def canonical(self) -> tuple:
        unique = {id(m): m for m in self._classes.values()}.values()
        classes = sorted(tuple(sorted(m)) for m in unique)
        return (tuple(classes), tuple(sorted(self.distinctions)))

    def __len__(self) -> int:
        return len(self.constraints)

    def __repr__(self) -> str:
        return f"<BindingSet constraints={len(self.constraints)}>"


def unifier(
    p: Literal, q: Literal, b: BindingSet
) -> list[Codesignation] | UnifyFailure:
    """Igualdades mínimas que fazem `p` e `q` codesignarem, sem checar distinções."""
    if p.predicate != q.predicate or p.arity != q.arity or p.positive != q.positive:
        return UnifyFailure("predicate")
    pairs: list[Codesignation] = []
    current = b
    for x, y in zip(p.args, q.args):
        if current.codesignate(x, y):
            continue
        cx, cy = current.value(x), current.value(y)
        if not is_variable(cx) and not is_variable(cy):
            return UnifyFailure("clash", (Codesignation.of(cx, cy),))
        pair = Codesignation.of(x, y)
        pairs.append(pair)
        current = current.extend((pair,))
    return pairs


def unify(p: Literal, q: Literal, b: BindingSet) -> BindingSet | UnifyFailure:
    """Extensão mínima de `b` que unifica `p` e `q`, ou o motivo da falha."""
    pairs = unifier(p, q, b)
    if isinstance(pairs, UnifyFailure):
        return pairs
    extended = b.extend(pairs)
    violated = extended.violated_distinction()
    if violated is not None:
        return UnifyFailure("distinct", (violated, *pairs))
    return extended
