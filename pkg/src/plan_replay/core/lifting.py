"""Generalização de constantes em variáveis (prefixo ?_)."""

from __future__ import annotations

from collections.abc import Mapping

from plan_replay.models.literals import LIFTED_PREFIX, Literal, is_variable


class Lifter:
    """Substitui constantes do problema por variáveis generalizadas.

    Constantes do domínio (citadas nos esquemas) ficam como estão. `overrides`
    fixa nomes para algumas constantes, em geral o inverso da substituição do
    caso que falhou, para que razão e caso de reparo usem as mesmas variáveis.
    """

    def __init__(
        self,
        domain_constants: frozenset[str] = frozenset(),
        overrides: Mapping[str, str] | None = None,
    ):
        self.domain_constants = domain_constants
        self.overrides = dict(overrides or {})

    @classmethod
    def inverse_of(
        cls, domain_constants: frozenset[str], substitution: Mapping[str, str]
    ) -> Lifter:
        overrides: dict[str, str] = {}
        for variable, constant in sorted(substitution.items()):
            if not is_variable(constant):
                overrides.setdefault(constant, variable)
        return cls(domain_constants, overrides)

    def term(self, term: str) -> str:
        if is_variable(term) or term in self.domain_constants:
            return term
        return self.overrides.get(term, f"{LIFTED_PREFIX}{term}")

    def literal(self, literal: Literal) -> Literal:
        return literal.map_args(self.term)

    def literals(self, literals) -> tuple[Literal, ...]:
        return tuple(self.literal(lit) for lit in literals)

    def __repr__(self) -> str:
        return f"<Lifter overrides={len(self.overrides)}>"
