"""Termos e literais do modelo STRIPS."""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass

VARIABLE_PREFIX = "?"
LIFTED_PREFIX = "?_"
STEP_SEPARATOR = "."


def is_variable(term: str) -> bool:
    """Variáveis começam com '?'; todo o resto é constante."""
    return term.startswith(VARIABLE_PREFIX)


def is_lifted(term: str) -> bool:
    """Variável gerada pela generalização de uma constante."""
    return term.startswith(LIFTED_PREFIX)


def step_variable(param: str, step_id: int) -> str:
    """Padroniza uma variável de esquema com o id do passo como sufixo."""
    return f"{param}{STEP_SEPARATOR}{step_id}"


def split_step_variable(term: str) -> tuple[str, int] | None:
    """Inverso de `step_variable`; None para termos que não são de passo."""
    if not is_variable(term) or is_lifted(term) or STEP_SEPARATOR not in term:
        return None
    base, _, suffix = term.rpartition(STEP_SEPARATOR)
    if not suffix.isdigit():
        return None
    return base, int(suffix)


@dataclass(frozen=True, order=True)
class Literal:
    """Literal com sinal. Efeitos de remoção são representados com positive=False."""

    predicate: str
    args: tuple[str, ...] = ()
    positive: bool = True

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return not any(is_variable(a) for a in self.args)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(a for a in self.args if is_variable(a))

    def negate(self) -> Literal:
        return Literal(self.predicate, self.args, not self.positive)

    def positive_form(self) -> Literal:
        if self.positive:
            return self
        return Literal(self.predicate, self.args, True)

    def substitute(self, mapping: Mapping[str, str]) -> Literal:
        if not mapping:
            return self
        return Literal(
            self.predicate, tuple(mapping.get(a, a) for a in self.args), self.positive
        )

    def map_args(self, term: Callable[[str], str]) -> Literal:
        return Literal(self.predicate, tuple(term(a) for a in self.args), self.positive)

    def same_shape(self, other: Literal) -> bool:
        return (
            self.predicate == other.predicate
            and self.arity == other.arity
            and self.positive == other.positive
        )

    def __str__(self) -> str:
        body = f"({' '.join((self.predicate, *self.args))})"
        return body if self.positive else f"(NOT {body})"

    def __repr__(self) -> str:
        return f"<Literal {self}>"


def positional_pattern(literal: Literal, keep: frozenset[str] = frozenset()) -> Literal:
    """Renomeia argumentos posicionalmente (?0, ?1, ...) preservando repetições.

    Constantes em `keep` permanecem. Usado para chaves da rede de discriminação e
    para as impressões digitais de irmãos NEW-LINK.
    """
    names: dict[str, str] = {}
    args = []
    for arg in literal.args:
        if arg in keep:
            args.append(arg)
            continue
        if arg not in names:
            names[arg] = f"?{len(names)}"
        args.append(names[arg])
    return Literal(literal.predicate, tuple(args), literal.positive)
