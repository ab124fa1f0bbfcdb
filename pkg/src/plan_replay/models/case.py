"""Casos da biblioteca e resultados de recuperação."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from .explanation import CaseFailureReason
from .literals import Literal
from .trace import DerivationTrace


@dataclass(frozen=True)
class CaseAnnotation:
    """Aresta de censura: quando `reason` vale, recupere `repair_id`."""

    reason: CaseFailureReason
    repair_id: int


@dataclass
class Case:
    """Derivação generalizada armazenada na biblioteca."""

    case_id: int
    goals: tuple[Literal, ...]
    footprint: tuple[Literal, ...]
    trace: DerivationTrace
    annotations: list[CaseAnnotation] = field(default_factory=list)
    repair_depth: int = 0
    parent_id: int | None = None

    @property
    def is_repair(self) -> bool:
        return self.parent_id is not None

    def signature(self) -> tuple:
        return (self.goals, self.footprint, self.trace.canonical())

    def __repr__(self) -> str:
        return (
            f"<Case id={self.case_id} goals={len(self.goals)} "
            f"footprint={len(self.footprint)} depth={self.repair_depth}>"
        )


@dataclass(frozen=True)
class CaseInstance:
    """Caso recuperado com a substituição que o encaixa no problema."""

    case: Case
    substitution: tuple[tuple[str, str], ...]
    covered: tuple[Literal, ...]

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.substitution)

    @classmethod
    def build(
        cls, case: Case, mapping: Mapping[str, str], covered: tuple[Literal, ...]
    ) -> CaseInstance:
        return cls(case, tuple(sorted(mapping.items())), covered)

    def __repr__(self) -> str:
        return f"<CaseInstance case={self.case.case_id} covered={len(self.covered)}>"


@dataclass(frozen=True)
class RetrievalResult:
    instances: tuple[CaseInstance, ...] = ()
    uncovered: tuple[Literal, ...] = ()
    retrieval_time: float = 0.0

    @property
    def covered(self) -> frozenset[Literal]:
        return frozenset(g for inst in self.instances for g in inst.covered)

    def __bool__(self) -> bool:
        return bool(self.instances)

    def __repr__(self) -> str:
        ids = [inst.case.case_id for inst in self.instances]
        return f"<RetrievalResult cases={ids} uncovered={len(self.uncovered)}>"
