"""Serialização de traços, casos e do manifesto da biblioteca.

Formato de um traço (uma decisão por linha, campos nomeados como no traço
impresso pelo planejador)::

    (trace :version 1
     :goals ((AT-OB ?_OB1 ?_ld))
     :footprint ((AT-OB ?_OB1 ?_li) ...)
     :decisions ((:name G1 :type START-NODE)
                 (:name G2 :type ESTABLISHMENT :kind NEW-STEP
                  :new-step (UNLOAD-PL ?O.1 ?P.1 ?_ld)
                  :new-link (1 (AT-OB ?_OB1 ?_ld) GOAL)
                  :open-cond ((AT-OB ?_OB1 ?_ld) GOAL)
                  :siblings ())
                 (:name G10 :type RESOLUTION :kind PROMOTION
                  :unsafe-link (2 (AT-PL PL1 ?_li) 4)
                  :effect (3 (NOT (AT-PL PL1 ?_li))))))
"""

from __future__ import annotations

from dataclasses import dataclass

from plan_replay.errors import LibraryError, ParseError
from plan_replay.models.case import Case, CaseAnnotation
from plan_replay.models.explanation import CaseFailureReason
from plan_replay.models.literals import Literal
from plan_replay.models.plan import (
    CausalLink,
    DecisionKind,
    OpenCondition,
    parse_step_label,
    step_label,
)
from plan_replay.models.trace import DecisionRecord, DecisionType, DerivationTrace

from .domain import literal_to_sexpr, parse_literal
from .sexpr import (
    SExpr,
    SList,
    dumps,
    expect_list,
    expect_symbol,
    keyword_sections,
    parse,
)

FORMAT_VERSION = 1
TRUE, FALSE = "T", "NIL"


# ============================================================================
# Escrita
# ============================================================================


def _link(link: CausalLink) -> list:
    return [
        step_label(link.producer),
        literal_to_sexpr(link.condition),
        step_label(link.consumer),
    ]


def record_to_sexpr(record: DecisionRecord) -> list:
    expr: list = [":name", record.name, ":type", record.type.value]
    if record.kind is not None:
        expr += [":kind", record.kind.value]
    if record.new_step is not None:
        expr += [":new-step", literal_to_sexpr(record.new_step)]
    if record.new_link is not None:
        expr += [":new-link", _link(record.new_link)]
    if record.open_cond is not None:
        oc = record.open_cond
        condition = literal_to_sexpr(oc.condition)
        expr += [":open-cond", [condition, step_label(oc.consumer)]]
    if record.unsafe_link is not None:
        expr += [":unsafe-link", _link(record.unsafe_link)]
    if record.effect is not None:
        step, lit = record.effect
        expr += [":effect", [step_label(step), literal_to_sexpr(lit)]]
    if record.type is DecisionType.ESTABLISHMENT:
        expr += [
            ":siblings",
            [[name, literal_to_sexpr(lit)] for name, lit in sorted(record.siblings)],
        ]
    return expr


def trace_to_sexpr(trace: DerivationTrace) -> list:
    return [
        "trace",
        ":version",
        str(FORMAT_VERSION),
        ":goals",
        [literal_to_sexpr(g) for g in trace.goals],
        ":footprint",
        [literal_to_sexpr(f) for f in trace.footprint],
        ":decisions",
        [record_to_sexpr(r) for r in trace.records],
    ]


def serialize_trace(trace: DerivationTrace) -> str:
    return dumps(trace_to_sexpr(trace)) + "\n"


def reason_to_sexpr(reason: CaseFailureReason) -> list:
    return [
        ":goals",
        [literal_to_sexpr(g) for g in reason.goals],
        ":conditions",
        [literal_to_sexpr(c) for c in reason.conditions],
        ":sound",
        TRUE if reason.sound else FALSE,
    ]


def serialize_reason(reason: CaseFailureReason) -> str:
    return dumps(["reason", *reason_to_sexpr(reason)]) + "\n"


def serialize_case(case: Case) -> str:
    annotations = [
        [":reason", reason_to_sexpr(a.reason), ":repair", str(a.repair_id)]
        for a in case.annotations
    ]
    expr = [
        "case",
        ":version",
        str(FORMAT_VERSION),
        ":id",
        str(case.case_id),
        ":parent",
        FALSE if case.parent_id is None else str(case.parent_id),
        ":repair-depth",
        str(case.repair_depth),
        ":goals",
        [literal_to_sexpr(g) for g in case.goals],
        ":footprint",
        [literal_to_sexpr(f) for f in case.footprint],
        ":annotations",
        annotations,
        ":trace",
        trace_to_sexpr(case.trace),
    ]
    return dumps(expr) + "\n"


# ============================================================================
# Leitura
# ============================================================================


def _int(expr: SExpr, what: str) -> int:
    symbol = expect_symbol(expr, what)
    try:
        return int(symbol)
    except ValueError as e:
        raise ParseError(
            f"Esperado inteiro para {what}: '{symbol}'", symbol.line, symbol.column
        ) from e


def _step(expr: SExpr) -> int:
    symbol = expect_symbol(expr, "passo")
    try:
        return parse_step_label(symbol)
    except ValueError as e:
        raise ParseError(
            f"Referência de passo inválida '{symbol}'", symbol.line, symbol.column
        ) from e


def _bool(expr: SExpr) -> bool:
    return expect_symbol(expr, "booleano").upper() == TRUE


def _literals(expr: SExpr, what: str) -> tuple:
    return tuple(parse_literal(e, allow_negative=True) for e in expect_list(expr, what))


def _parse_link(expr: SExpr) -> CausalLink:
    items = expect_list(expr, "vínculo")
    if len(items) != 3:
        raise ParseError("Vínculo deve ter 3 elementos", items.line, items.column)
    return CausalLink(_step(items[0]), parse_literal(items[1], True), _step(items[2]))


def _header(expr: SExpr, head: str) -> dict[str, SExpr]:
    items = expect_list(expr, head)
    if not items or expect_symbol(items[0], head).lower() != head:
        raise ParseError(f"Esperado ({head} ...)", items.line, items.column)
    sections = keyword_sections(items, 1)
    version = sections.get(":version")
    if version is not None and _int(version, ":version") != FORMAT_VERSION:
        raise ParseError(
            f"Versão de formato não suportada: {version}", items.line, items.column
        )
    return sections


def parse_record(expr: SExpr) -> DecisionRecord:
    items = expect_list(expr, "decisão")
    fields = keyword_sections(items)
    try:
        name = str(expect_symbol(fields[":name"], ":name"))
        type_ = DecisionType(expect_symbol(fields[":type"], ":type"))
    except KeyError as e:
        raise ParseError(f"Decisão sem campo {e}", items.line, items.column) from e
    except ValueError as e:
        raise ParseError(str(e), items.line, items.column) from e

    kind = None
    if ":kind" in fields:
        try:
            kind = DecisionKind(expect_symbol(fields[":kind"], ":kind"))
        except ValueError as e:
            raise ParseError(str(e), items.line, items.column) from e
    new_step = parse_literal(fields[":new-step"]) if ":new-step" in fields else None
    new_link = _parse_link(fields[":new-link"]) if ":new-link" in fields else None
    open_cond = None
    if ":open-cond" in fields:
        pair = expect_list(fields[":open-cond"], ":open-cond")
        if len(pair) != 2:
            raise ParseError(":open-cond com aridade != 2", pair.line, pair.column)
        open_cond = OpenCondition(parse_literal(pair[0], True), _step(pair[1]))
    unsafe_link = None
    if ":unsafe-link" in fields:
        unsafe_link = _parse_link(fields[":unsafe-link"])
    effect = None
    if ":effect" in fields:
        pair = expect_list(fields[":effect"], ":effect")
        if len(pair) != 2:
            raise ParseError(":effect deve ser (passo literal)", pair.line, pair.column)
        effect = (_step(pair[0]), parse_literal(pair[1], True))
    raw_siblings = expect_list(fields.get(":siblings", SList()), ":siblings")
    siblings = set()
    for entry in raw_siblings:
        pair = expect_list(entry, "irmão")
        if len(pair) != 2:
            raise ParseError("Irmão com aridade != 2", pair.line, pair.column)
        producer = str(expect_symbol(pair[0], "produtor"))
        siblings.add((producer, parse_literal(pair[1], True)))
    return DecisionRecord(
        name=name,
        type=type_,
        kind=kind,
        new_step=new_step,
        new_link=new_link,
        open_cond=open_cond,
        unsafe_link=unsafe_link,
        effect=effect,
        siblings=frozenset(siblings),
    )


def trace_from_sexpr(expr: SExpr) -> DerivationTrace:
    sections = _header(expr, "trace")
    raw = expect_list(sections.get(":decisions", SList()), ":decisions")
    records = tuple(parse_record(r) for r in raw)
    if not records or records[0].type is not DecisionType.START_NODE:
        raise ParseError("Traço deve começar com START-NODE", 1, 1)
    return DerivationTrace(
        records=records,
        goals=_literals(sections.get(":goals", SList()), ":goals"),
        footprint=_literals(sections.get(":footprint", SList()), ":footprint"),
    )


def deserialize_trace(text: str) -> DerivationTrace:
    return trace_from_sexpr(parse(text))


def reason_from_sections(sections: dict[str, SExpr]) -> CaseFailureReason:
    return CaseFailureReason(
        goals=_literals(sections.get(":goals", SList()), ":goals"),
        conditions=_literals(sections.get(":conditions", SList()), ":conditions"),
        sound=_bool(sections[":sound"]) if ":sound" in sections else True,
    )


def deserialize_reason(text: str) -> CaseFailureReason:
    return reason_from_sections(_header(parse(text), "reason"))


def deserialize_case(text: str) -> Case:
    sections = _header(parse(text), "case")
    if ":id" not in sections or ":trace" not in sections:
        raise LibraryError("Arquivo de caso sem :id ou :trace")
    annotations = []
    for entry in expect_list(sections.get(":annotations", SList()), ":annotations"):
        fields = keyword_sections(expect_list(entry, "anotação"))
        if ":reason" not in fields or ":repair" not in fields:
            raise LibraryError("Anotação sem :reason ou :repair")
        reason_fields = keyword_sections(expect_list(fields[":reason"], ":reason"))
        reason = reason_from_sections(reason_fields)
        annotations.append(CaseAnnotation(reason, _int(fields[":repair"], ":repair")))
    parent = sections.get(":parent")
    depth = sections.get(":repair-depth")
    parent_id = None
    if parent is not None and expect_symbol(parent, ":parent").upper() != FALSE:
        parent_id = _int(parent, ":parent")
    return Case(
        case_id=_int(sections[":id"], ":id"),
        goals=_literals(sections.get(":goals", SList()), ":goals"),
        footprint=_literals(sections.get(":footprint", SList()), ":footprint"),
        trace=trace_from_sexpr(sections[":trace"]),
        annotations=annotations,
        repair_depth=_int(depth, ":repair-depth") if depth is not None else 0,
        parent_id=parent_id,
    )


# ============================================================================
# Manifesto
# ============================================================================


@dataclass(frozen=True)
class ManifestEntry:
    case_id: int
    filename: str
    parent_id: int | None = None


@dataclass(frozen=True)
class Manifest:
    """Estrutura da rede: meta generalizada -> casos de topo, e a lista de arquivos."""

    entries: tuple[ManifestEntry, ...] = ()
    net: tuple[tuple[Literal, tuple[int, ...]], ...] = ()
    next_id: int = 1
    repair_depth_limit: int = 4


def serialize_manifest(manifest: Manifest) -> str:
    expr = [
        "library",
        ":version",
        str(FORMAT_VERSION),
        ":next-id",
        str(manifest.next_id),
        ":repair-depth-limit",
        str(manifest.repair_depth_limit),
        ":net",
        [
            [":goal", literal_to_sexpr(key), ":cases", [str(i) for i in ids]]
            for key, ids in manifest.net
        ],
        ":cases",
        [
            [
                ":id",
                str(e.case_id),
                ":file",
                e.filename,
                ":parent",
                FALSE if e.parent_id is None else str(e.parent_id),
            ]
            for e in manifest.entries
        ],
    ]
    return dumps(expr) + "\n"


def deserialize_manifest(text: str) -> Manifest:
    sections = _header(parse(text), "library")
    net = []
    for entry in expect_list(sections.get(":net", SList()), ":net"):
        fields = keyword_sections(expect_list(entry, "nó da rede"))
        ids = tuple(_int(i, "id") for i in expect_list(fields[":cases"], ":cases"))
        net.append((parse_literal(fields[":goal"]), ids))
    entries = []
    for entry in expect_list(sections.get(":cases", SList()), ":cases"):
        fields = keyword_sections(expect_list(entry, "caso"))
        parent = fields.get(":parent")
        parent_id = None
        if parent is not None and expect_symbol(parent, ":parent").upper() != FALSE:
            parent_id = _int(parent, ":parent")
        entries.append(
            ManifestEntry(
                _int(fields[":id"], ":id"),
                str(expect_symbol(fields[":file"], ":file")),
                parent_id,
            )
        )
    next_id = sections.get(":next-id")
    limit = sections.get(":repair-depth-limit")
    return Manifest(
        entries=tuple(entries),
        net=tuple(net),
        next_id=_int(next_id, ":next-id") if next_id is not None else 1,
        repair_depth_limit=(
            _int(limit, ":repair-depth-limit") if limit is not None else 4
        ),
    )
