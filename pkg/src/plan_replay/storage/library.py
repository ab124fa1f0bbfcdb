"""Biblioteca de casos: armazenamento guiado por falhas, rede de discriminação
e recuperação com censura."""

from __future__ import annotations

import re
import time
from collections.abc import Iterator
from dataclasses import dataclass

from plan_replay.core.ebl import find_reason_witness
from plan_replay.core.lifting import Lifter
from plan_replay.core.matching import match_all, match_injective
from plan_replay.core.trace import lift
from plan_replay.errors import LibraryError, PrefixViolationError
from plan_replay.models.case import Case, CaseAnnotation, CaseInstance, RetrievalResult
from plan_replay.models.explanation import CaseFailureReason
from plan_replay.models.literals import Literal
from plan_replay.models.operators import ProblemSpec
from plan_replay.models.replay import ReplayMode
from plan_replay.models.trace import DerivationTrace
from plan_replay.parsers.domain import literal_to_sexpr
from plan_replay.parsers.sexpr import dumps
from plan_replay.parsers.trace import (
    Manifest,
    ManifestEntry,
    deserialize_case,
    deserialize_manifest,
    record_to_sexpr,
    serialize_case,
    serialize_manifest,
)
from plan_replay.utils import get_logger

from .base import StorageBackend

logger = get_logger(__name__)

MANIFEST_FILE = "library.sexp"
CASES_DIR = "cases"
DEFAULT_REPAIR_DEPTH_LIMIT = 4

_LIFTED_TERM = re.compile(r"\?_[^\s()]+")


@dataclass(frozen=True)
class LibraryStats:
    cases: int
    top_level: int
    repairs: int
    max_repair_depth: int
    annotations: int


def net_key(goal: Literal, constants: frozenset[str]) -> Literal:
    """Chave de primeiro nível: predicado com constantes do domínio preservadas."""
    return Literal(
        goal.predicate,
        tuple(a if a in constants else "?" for a in goal.args),
        goal.positive,
    )


def _alpha_rename(texts: list[str]) -> list[str]:
    """Renomeia ?_X pela ordem de aparição, consistentemente entre os textos."""
    names: dict[str, str] = {}

    def rename(match: re.Match) -> str:
        return names.setdefault(match.group(0), f"?_{len(names)}")

    return [_LIFTED_TERM.sub(rename, text) for text in texts]


def _record_texts(trace: DerivationTrace) -> list[str]:
    return [dumps(record_to_sexpr(r)[2:], width=10**9) for r in trace.records]


class CaseLibrary:
    """
    Rede de discriminação de casos.

    Primeiro nível: meta generalizada de cada caso de topo. Casos de reparo ficam
    abaixo do caso que censuram e só são alcançados pelas anotações. Com um
    backend, cada mutação grava o caso e o manifesto.
    """

    def __init__(
        self,
        backend: StorageBackend | None = None,
        repair_depth_limit: int = DEFAULT_REPAIR_DEPTH_LIMIT,
    ):
        if repair_depth_limit < 0:
            raise ValueError(f"Limite de profundidade inválido: {repair_depth_limit}")
        self.backend = backend
        self.repair_depth_limit = repair_depth_limit
        self.cases: dict[int, Case] = {}
        self._net: dict[Literal, list[int]] = {}
        self._next_id = 1

    # ------------------------------------------------------------------
    # Acesso
    # ------------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.cases)

    def __iter__(self) -> Iterator[Case]:
        return iter(self.cases[i] for i in sorted(self.cases))

    def __contains__(self, case_id: int) -> bool:
        return case_id in self.cases

    def get(self, case_id: int) -> Case:
        try:
            return self.cases[case_id]
        except KeyError:
            raise LibraryError(f"Caso {case_id} não existe") from None

    @property
    def top_level(self) -> list[Case]:
        return [c for c in self if not c.is_repair]

    def stats(self) -> LibraryStats:
        cases = list(self)
        return LibraryStats(
            cases=len(cases),
            top_level=sum(1 for c in cases if not c.is_repair),
            repairs=sum(1 for c in cases if c.is_repair),
            max_repair_depth=max((c.repair_depth for c in cases), default=0),
            annotations=sum(len(c.annotations) for c in cases),
        )

    def clear(self) -> None:
        self.cases.clear()
        self._net.clear()
        self._next_id = 1
        self._persist()

    def __repr__(self) -> str:
        return f"<CaseLibrary cases={len(self.cases)} net={len(self._net)}>"

    # ------------------------------------------------------------------
    # Armazenamento
    # ------------------------------------------------------------------

    def signature(self, case: Case) -> tuple[str, ...]:
        """Forma canônica módulo renomeação das variáveis generalizadas."""
        goals = dumps([literal_to_sexpr(g) for g in case.goals], width=10**9)
        footprint = dumps([literal_to_sexpr(f) for f in case.footprint], width=10**9)
        return tuple(_alpha_rename([goals, footprint, *_record_texts(case.trace)]))

    def find_equivalent(self, case: Case) -> Case | None:
        key = self.signature(case)
        for existing in self:
            if self.signature(existing) == key:
                return existing
        return None

    def find_same_conditions(self, case: Case) -> Case | None:
        """Caso de topo com as mesmas metas e o mesmo footprint, módulo renomeação.

        A ordem das metas e as decisões do traço não importam: os dois casos
        seriam recuperados exatamente nos mesmos problemas.
        """
        for existing in self.top_level:
            if _same_conditions(case, existing):
                return existing
        return None

    def _check_prefix(self, trace: DerivationTrace) -> None:
        new = _alpha_rename(_record_texts(trace))
        for existing in self:
            old = _alpha_rename(_record_texts(existing.trace))
            shorter, longer = sorted((new, old), key=len)
            if len(shorter) < len(longer) and longer[: len(shorter)] == shorter:
                raise PrefixViolationError(
                    f"Decisões do novo caso e do caso {existing.case_id} "
                    "formam prefixo uma da outra"
                )

    def store(
        self,
        trace: DerivationTrace,
        problem: ProblemSpec,
        failure_reason: CaseFailureReason | None = None,
        failing_case: Case | None = None,
        lifter: Lifter | None = None,
    ) -> int | None:
        """Guarda um caso de topo ou, com razão de falha, um caso de reparo.

        Devolve o id do caso criado ou None quando nada foi armazenado.
        """
        constants = problem.domain.constants
        if failure_reason is None:
            lifted = lift(trace, trace.goals, Lifter(constants))
            return self._add(lifted, problem, parent=None)

        if failing_case is None:
            raise LibraryError("Caso de reparo exige o caso que falhou")
        parent = self.get(failing_case.case_id)
        depth = parent.repair_depth + 1
        if depth > self.repair_depth_limit:
            logger.warning(
                f"Reparo do caso {parent.case_id} ignorado: profundidade {depth} "
                f"> {self.repair_depth_limit}"
            )
            return None
        if any(a.reason == failure_reason for a in parent.annotations):
            logger.warning(f"Caso {parent.case_id} já anotado com esta razão")
            return None

        lifter = lifter or Lifter(constants)
        reason_goals = set(failure_reason.goals)
        keep = [g for g in trace.goals if lifter.literal(g) in reason_goals]
        if not keep:
            logger.warning("Razão sem metas do problema; reparo cobre todas as metas")
            keep = list(trace.goals)
        lifted = lift(trace, keep, lifter)
        if not reason_goals <= set(lifted.goals):
            raise LibraryError(
                f"Caso de reparo não cobre as metas da razão {failure_reason}"
            )

        existing = self._find_case(lifted)
        if existing is not None:
            repair_id = existing.case_id
            if repair_id == parent.case_id or not reason_goals <= set(existing.goals):
                logger.warning(f"Reparo equivalente ao caso {repair_id}; nada anotado")
                return None
            logger.info(f"Reparo equivalente ao caso {repair_id}; só anotando")
            created = None
        else:
            repair_id = self._add(lifted, problem, parent=parent, depth=depth)
            if repair_id is None:
                return None
            created = repair_id

        parent.annotations.append(CaseAnnotation(failure_reason, repair_id))
        self._write_case(parent)
        self._persist()
        logger.info(f"✓ Caso {parent.case_id} censurado por {failure_reason}")
        return created

    def _find_case(self, trace: DerivationTrace) -> Case | None:
        probe = Case(0, trace.goals, trace.footprint, trace)
        return self.find_equivalent(probe)

    def _add(
        self,
        lifted: DerivationTrace,
        problem: ProblemSpec,
        parent: Case | None,
        depth: int = 0,
    ) -> int | None:
        if not lifted.decisions:
            logger.debug("Traço sem decisões; nada a armazenar")
            return None
        case = Case(
            case_id=self._next_id,
            goals=lifted.goals,
            footprint=lifted.footprint,
            trace=lifted,
            repair_depth=depth,
            parent_id=parent.case_id if parent is not None else None,
        )
        if self.find_equivalent(case) is not None:
            logger.warning("Caso equivalente já existe; nada armazenado")
            return None
        if parent is None:
            twin = self.find_same_conditions(case)
            if twin is not None:
                logger.info(
                    f"Caso {twin.case_id} já cobre as mesmas metas e condições; "
                    "nada armazenado"
                )
                return None
        self._check_prefix(lifted)

        self.cases[case.case_id] = case
        self._next_id += 1
        if parent is None:
            for goal in case.goals:
                ids = self._net.setdefault(net_key(goal, problem.domain.constants), [])
                ids.append(case.case_id)
        self._write_case(case)
        self._persist()
        self.check_invariants()
        kind = "reparo" if parent is not None else "topo"
        logger.info(
            f"✓ Caso {case.case_id} ({kind}) armazenado: "
            f"{len(case.goals)} metas, {len(lifted.decisions)} decisões"
        )
        return case.case_id

    def check_invariants(self) -> None:
        """Prefixo-livre e cobertura das anotações; levanta LibraryError."""
        texts = {c.case_id: _alpha_rename(_record_texts(c.trace)) for c in self}
        ids = sorted(texts)
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                shorter, longer = sorted((texts[a], texts[b]), key=len)
                if len(shorter) < len(longer) and longer[: len(shorter)] == shorter:
                    raise PrefixViolationError(f"Casos {a} e {b} violam prefixo-livre")
        for case in self:
            for annotation in case.annotations:
                repair = self.cases.get(annotation.repair_id)
                if repair is None:
                    raise LibraryError(
                        f"Anotação do caso {case.case_id} aponta para "
                        f"caso inexistente {annotation.repair_id}"
                    )
                if not set(annotation.reason.goals) <= set(repair.goals):
                    raise LibraryError(
                        f"Caso {repair.case_id} não cobre as metas da razão"
                    )

    # ------------------------------------------------------------------
    # Recuperação
    # ------------------------------------------------------------------

    def _instances(
        self,
        case: Case,
        problem: ProblemSpec,
        theta: dict[str, str] | None = None,
    ) -> Iterator[CaseInstance]:
        """Instâncias do caso no problema: metas injetivas e footprint completo."""
        matches = match_injective(case.goals, problem.goals, theta or {})
        for goal_theta, image in matches:
            for full in match_all(case.footprint, problem.init, goal_theta):
                yield CaseInstance.build(case, full, image)
                break

    def _best_instance(
        self, case: Case, problem: ProblemSpec, goal: Literal, uncovered: list[Literal]
    ) -> CaseInstance | None:
        best, best_count = None, -1
        for instance in self._instances(case, problem):
            if goal not in instance.covered:
                continue
            count = sum(1 for g in instance.covered if g in uncovered)
            if count > best_count:
                best, best_count = instance, count
        return best

    def _redirect(
        self,
        instance: CaseInstance,
        problem: ProblemSpec,
        goal: Literal | None = None,
        depth: int = 0,
    ) -> CaseInstance | None:
        """Segue anotações cujas razões valem.

        Instâncias do reparo que cobrem `goal` são tentadas primeiro. None quando
        uma razão sólida vale e nenhum reparo se aplica.
        """
        for annotation in instance.case.annotations:
            witness = find_reason_witness(annotation.reason, problem, instance.mapping)
            if witness is None:
                continue
            repair = self.cases.get(annotation.repair_id)
            logger.debug(
                f"Razão do caso {instance.case.case_id} vale; "
                f"redirecionando para {annotation.repair_id}"
            )
            if repair is not None and depth < self.repair_depth_limit:
                names = _case_variables(repair)
                theta = {k: v for k, v in witness.items() if k in names}
                repairs = sorted(
                    self._instances(repair, problem, theta),
                    key=lambda c: goal not in c.covered,
                )
                for candidate in repairs:
                    redirected = self._redirect(candidate, problem, goal, depth + 1)
                    if redirected is not None:
                        return redirected
            if annotation.reason.sound:
                return None
        return instance

    def retrieve(
        self, problem: ProblemSpec, mode: ReplayMode | str = ReplayMode.STATIC
    ) -> RetrievalResult:
        """Cobertura gulosa das metas; em modo de aprendizado, aplica a censura."""
        started = time.perf_counter()
        mode = ReplayMode(mode)
        if not mode.uses_library or not self.cases:
            elapsed = time.perf_counter() - started
            return RetrievalResult((), tuple(problem.goals), elapsed)

        constants = problem.domain.constants
        pending = list(problem.goals)
        uncovered: list[Literal] = []
        instances: list[CaseInstance] = []
        while pending:
            goal = pending[0]
            candidates = []
            for case_id in self._net.get(net_key(goal, constants), []):
                case = self.cases[case_id]
                instance = self._best_instance(case, problem, goal, pending)
                if instance is not None:
                    count = sum(1 for g in instance.covered if g in pending)
                    score = (-count, -len(case.footprint), case_id)
                    candidates.append((score, instance))

            chosen = None
            for _, instance in sorted(candidates, key=lambda c: c[0]):
                if mode.censors:
                    instance = self._redirect(instance, problem, goal)
                    if instance is None or instance in instances:
                        continue
                    if not any(g in pending for g in instance.covered):
                        continue
                chosen = instance
                break

            if chosen is None:
                uncovered.append(pending.pop(0))
                continue
            instances.append(chosen)
            pending = [g for g in pending if g not in chosen.covered]
            if goal in pending:
                # reparo que não cobre a meta: o caso censurado não volta a ser tentado
                pending.remove(goal)
                uncovered.append(goal)

        covered = {g for inst in instances for g in inst.covered}
        uncovered = [g for g in uncovered if g not in covered]
        result = RetrievalResult(
            tuple(instances), tuple(uncovered), time.perf_counter() - started
        )
        logger.debug(f"Recuperação ({mode.value}) para {problem.name}: {result!r}")
        return result

    # ------------------------------------------------------------------
    # Persistência
    # ------------------------------------------------------------------

    @staticmethod
    def case_file(case_id: int) -> str:
        return f"{CASES_DIR}/case-{case_id:04d}.sexp"

    def _write_case(self, case: Case) -> None:
        if self.backend is not None:
            self.backend.write_text(self.case_file(case.case_id), serialize_case(case))

    def manifest(self) -> Manifest:
        return Manifest(
            entries=tuple(
                ManifestEntry(c.case_id, self.case_file(c.case_id), c.parent_id)
                for c in self
            ),
            net=tuple((key, tuple(ids)) for key, ids in sorted(self._net.items())),
            next_id=self._next_id,
            repair_depth_limit=self.repair_depth_limit,
        )

    def _persist(self) -> None:
        if self.backend is not None:
            self.backend.write_text(MANIFEST_FILE, serialize_manifest(self.manifest()))

    @classmethod
    def load(
        cls, backend: StorageBackend, repair_depth_limit: int | None = None
    ) -> CaseLibrary:
        """Lê o manifesto e os casos; biblioteca vazia se não há manifesto."""
        if not backend.exists(MANIFEST_FILE):
            logger.info(f"Biblioteca vazia em {backend.get_uri('')}")
            if repair_depth_limit is None:
                repair_depth_limit = DEFAULT_REPAIR_DEPTH_LIMIT
            return cls(backend, repair_depth_limit)

        manifest = deserialize_manifest(backend.read_text(MANIFEST_FILE))
        if repair_depth_limit is None:
            repair_depth_limit = manifest.repair_depth_limit
        library = cls(backend, repair_depth_limit)
        for entry in manifest.entries:
            case = deserialize_case(backend.read_text(entry.filename))
            if case.case_id != entry.case_id:
                raise LibraryError(
                    f"Arquivo {entry.filename} contém caso {case.case_id}"
                )
            library.cases[case.case_id] = case
        library._net = {key: list(ids) for key, ids in manifest.net}
        library._next_id = max(manifest.next_id, max(library.cases, default=0) + 1)
        library.check_invariants()
        logger.info(f"✓ Biblioteca carregada: {len(library)} casos")
        return library


def _same_conditions(a: Case, b: Case) -> bool:
    if len(a.goals) != len(b.goals) or len(a.footprint) != len(b.footprint):
        return False
    for theta, _ in match_injective(a.goals, b.goals, {}):
        for full in match_all(a.footprint, b.footprint, theta):
            if len(set(full.values())) == len(full):
                return True
    return False


def _case_variables(case: Case) -> frozenset[str]:
    literals = (*case.goals, *case.footprint)
    return frozenset(v for lit in literals for v in lit.variables)
