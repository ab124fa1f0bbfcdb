"""Registros de decisão e traços de derivação."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .literals import Literal
from .plan import CausalLink, DecisionKind, OpenCondition

# Impressão de um irmão NEW-LINK: (esquema produtor ou START, padrão do efeito)
Fingerprint = tuple[str, Literal]


class DecisionType(str, Enum):
    START_NODE = "START-NODE"
    ESTABLISHMENT = "ESTABLISHMENT"
    RESOLUTION = "RESOLUTION"


@dataclass(frozen=True)
class DecisionRecord:
    """Uma instrução do traço.

    Os literais são os resolvidos no momento da decisão; ids de passo são locais
    ao traço e seguem a ordem de criação.
    """

    name: str
    type: DecisionType
    kind: DecisionKind | None = None
    new_step: Literal | None = None
    new_link: CausalLink | None = None
    open_cond: OpenCondition | None = None
    unsafe_link: CausalLink | None = None
    effect: tuple[int, Literal] | None = None
    siblings: frozenset[Fingerprint] = frozenset()

    @property
    def created_step(self) -> int | None:
        """Id local do passo criado por um NEW-STEP."""
        if self.kind is DecisionKind.NEW_STEP and self.new_link is not None:
            return self.new_link.producer
        return None

    def canonical(self) -> tuple:
        """Forma sem nome, usada nas comparações de prefixo e duplicidade."""
        return (
            self.type,
            self.kind,
            self.new_step,
            self.new_link,
            self.open_cond,
            self.unsafe_link,
            self.effect,
            tuple(sorted(self.siblings)),
        )

    def renamed(self, name: str) -> DecisionRecord:
        return replace(self, name=name)

    def __repr__(self) -> str:
        kind = f" {self.kind.value}" if self.kind else ""
        return f"<DecisionRecord {self.name} {self.type.value}{kind}>"


START_RECORD = DecisionRecord(name="G1", type=DecisionType.START_NODE)


@dataclass(frozen=True)
class DerivationTrace:
    """Decisões da raiz até a solução, com a impressão do problema."""

    records: tuple[DecisionRecord, ...] = (START_RECORD,)
    goals: tuple[Literal, ...] = ()
    footprint: tuple[Literal, ...] = field(default=())

    @property
    def decisions(self) -> tuple[DecisionRecord, ...]:
        return tuple(r for r in self.records if r.type is not DecisionType.START_NODE)

    def canonical(self) -> tuple:
        return tuple(r.canonical() for r in self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __repr__(self) -> str:
        return f"<DerivationTrace records={len(self.records)} goals={len(self.goals)}>"
