"""Parser de domínios e problemas no dialeto s-expression."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from plan_replay.errors import DomainValidationError, ParseError
from plan_replay.models.literals import Literal, is_variable
from plan_replay.models.operators import Domain, OperatorSchema, ProblemSpec
from plan_replay.utils import get_logger

from .sexpr import (
    SExpr,
    SList,
    Symbol,
    expect_list,
    expect_symbol,
    keyword_sections,
    parse_many,
)

logger = get_logger(__name__)

ACTION_KEYS = {":parameters", ":precondition", ":add", ":delete", ":equals"}


# ============================================================================
# Literais
# ============================================================================


def _nth(items: SList, index: int, what: str) -> SExpr:
    if index >= len(items):
        raise ParseError(f"Faltando {what}", items.line, items.column)
    return items[index]


def parse_literal(expr: SExpr, allow_negative: bool = False) -> Literal:
    """`(P a b)` ou, se permitido, `(NOT (P a b))`."""
    items = expect_list(expr, "literal")
    if not items:
        raise ParseError("Literal vazio", items.line, items.column)
    head = expect_symbol(items[0], "predicado")
    if head.upper() == "NOT" and len(items) == 2 and isinstance(items[1], SList):
        if not allow_negative:
            raise ParseError(
                "Literal negativo não permitido aqui", head.line, head.column
            )
        return parse_literal(items[1]).negate()
    args = tuple(str(expect_symbol(a, "argumento")) for a in items[1:])
    return Literal(str(head), args)


def literal_to_sexpr(literal: Literal) -> list:
    body = [literal.predicate, *literal.args]
    return body if literal.positive else ["NOT", body]


def _literal_list(expr: SExpr, what: str, allow_negative: bool = False) -> tuple:
    return tuple(parse_literal(e, allow_negative) for e in expect_list(expr, what))


# ============================================================================
# Domínio
# ============================================================================


def _parse_constraints(expr: SExpr) -> tuple[tuple, tuple]:
    """`:equals ((?A ?B) (NOT (?C ?D)))`: pares iguais e pares distintos."""
    equals, not_equals = [], []
    for entry in expect_list(expr, ":equals"):
        items = expect_list(entry, "restrição")
        target = equals
        if items and isinstance(items[0], Symbol) and items[0].upper() == "NOT":
            if len(items) != 2:
                raise ParseError("Restrição NOT malformada", items.line, items.column)
            items = expect_list(items[1], "restrição")
            target = not_equals
        if len(items) != 2:
            raise ParseError("Restrição com aridade != 2", items.line, items.column)
        first, second = (str(expect_symbol(t, "termo")) for t in items)
        target.append((first, second))
    return tuple(equals), tuple(not_equals)


def _parse_action(expr: SList) -> OperatorSchema:
    name = expect_symbol(_nth(expr, 1, "nome da ação"), "nome da ação")
    sections = keyword_sections(expr, 2)
    unknown = set(sections) - ACTION_KEYS
    if unknown:
        raise ParseError(
            f"Seções desconhecidas em {name}: {sorted(unknown)}",
            name.line,
            name.column,
        )

    raw_params = expect_list(sections.get(":parameters", SList()), ":parameters")
    params = tuple(str(expect_symbol(p, "parâmetro")) for p in raw_params)
    precond = _literal_list(sections.get(":precondition", SList()), ":precondition")
    add = _literal_list(sections.get(":add", SList()), ":add")
    delete = _literal_list(sections.get(":delete", SList()), ":delete")
    equals, not_equals = _parse_constraints(sections.get(":equals", SList()))

    schema = OperatorSchema(str(name), params, precond, add, delete, equals, not_equals)
    _validate_schema(schema, name)
    return schema


def _validate_schema(schema: OperatorSchema, where: Symbol) -> None:
    declared = set(schema.params)
    if len(declared) != len(schema.params):
        raise DomainValidationError(f"{schema.name}: parâmetros repetidos")
    for param in schema.params:
        if not is_variable(param):
            raise DomainValidationError(
                f"{schema.name}: parâmetro '{param}' não é variável"
            )
    literals = (*schema.precond, *schema.add, *schema.delete)
    used = [a for lit in literals for a in lit.args]
    used += [t for pair in (*schema.equals, *schema.not_equals) for t in pair]
    for term in used:
        if is_variable(term) and term not in declared:
            raise DomainValidationError(
                f"{schema.name}: variável não ligada '{term}' "
                f"(linha {where.line}, coluna {where.column})"
            )


def _check_arities(literals, arities: dict[str, int], where: str) -> None:
    for lit in literals:
        known = arities.setdefault(lit.predicate, lit.arity)
        if known != lit.arity:
            raise DomainValidationError(
                f"Aridade inconsistente para {lit.predicate} em {where}: "
                f"{lit.arity} (esperado {known})"
            )


def _domain_arities(domain: Domain) -> dict[str, int]:
    arities: dict[str, int] = {}
    for schema in domain.schemas:
        literals = (*schema.precond, *schema.add, *schema.delete)
        _check_arities(literals, arities, schema.name)
    return arities


def _parse_domain_expr(expr: SList) -> Domain:
    header = expect_list(_nth(expr, 1, "cabeçalho"), "cabeçalho do domínio")
    name = str(expect_symbol(_nth(header, 1, "nome do domínio"), "nome do domínio"))
    schemas = []
    for item in expr[2:]:
        action = expect_list(item, "ação")
        head = expect_symbol(action[0], "palavra-chave") if action else None
        if head is None or head.lower() != ":action":
            raise ParseError("Esperado (:action ...)", action.line, action.column)
        schemas.append(_parse_action(action))
    names = [s.name for s in schemas]
    if len(set(names)) != len(names):
        raise DomainValidationError(f"Domínio {name}: esquemas repetidos")
    domain = Domain(name, tuple(schemas))
    _domain_arities(domain)
    return domain


# ============================================================================
# Problema
# ============================================================================


def _parse_problem_expr(expr: SList, domain: Domain) -> ProblemSpec:
    header = expect_list(_nth(expr, 1, "cabeçalho"), "cabeçalho do problema")
    name = str(expect_symbol(_nth(header, 1, "nome do problema"), "nome do problema"))
    init: tuple[Literal, ...] = ()
    goals: tuple[Literal, ...] = ()
    domain_name = None
    for item in expr[2:]:
        section = expect_list(item, "seção do problema")
        key = expect_symbol(section[0], "seção").lower() if section else ""
        if key == ":domain":
            domain_name = str(expect_symbol(_nth(section, 1, "domínio"), "domínio"))
        elif key == ":init":
            init = tuple(parse_literal(e) for e in section[1:])
        elif key == ":goal":
            goals = tuple(parse_literal(e) for e in section[1:])
        else:
            raise ParseError(
                f"Seção desconhecida '{key}'", section.line, section.column
            )

    if domain_name is not None and domain_name != domain.name:
        raise DomainValidationError(
            f"Problema {name} declara domínio {domain_name}, carregado {domain.name}"
        )
    arities = _domain_arities(domain)
    _check_arities(init, arities, f"{name} :init")
    _check_arities(goals, arities, f"{name} :goal")
    for lit in (*init, *goals):
        if not lit.is_ground:
            raise DomainValidationError(f"{name}: literal não aterrado {lit}")
    return ProblemSpec(name, domain, frozenset(init), tuple(dict.fromkeys(goals)))


# ============================================================================
# API pública
# ============================================================================


def _defines(text: str) -> tuple[list[SList], list[SList]]:
    domains, problems = [], []
    for expr in parse_many(text):
        items = expect_list(expr, "define")
        head = expect_symbol(items[0], "define") if items else None
        if head is None or head.lower() != "define" or len(items) < 2:
            raise ParseError("Esperado (define ...)", items.line, items.column)
        kind = expect_symbol(expect_list(items[1], "cabeçalho")[0], "tipo").lower()
        if kind == "domain":
            domains.append(items)
        elif kind == "problem":
            problems.append(items)
        else:
            raise ParseError(
                f"Tipo de define desconhecido '{kind}'", items.line, items.column
            )
    return domains, problems


def parse_domain(text: str) -> Domain:
    domains, _ = _defines(text)
    if len(domains) != 1:
        raise DomainValidationError(f"Esperado um domínio, encontrados {len(domains)}")
    return _parse_domain_expr(domains[0])


def parse_problem(text: str, domain: Domain) -> ProblemSpec:
    _, problems = _defines(text)
    if len(problems) != 1:
        raise DomainValidationError(
            f"Esperado um problema, encontrados {len(problems)}"
        )
    return _parse_problem_expr(problems[0], domain)


def parse_domain_and_problem(text: str) -> tuple[Domain, ProblemSpec]:
    """Texto com um domínio e um problema (em qualquer ordem)."""
    domains, problems = _defines(text)
    if len(domains) != 1 or len(problems) != 1:
        raise DomainValidationError(
            f"Esperados um domínio e um problema, encontrados "
            f"{len(domains)} e {len(problems)}"
        )
    domain = _parse_domain_expr(domains[0])
    problem = _parse_problem_expr(problems[0], domain)
    logger.debug(f"Carregados {domain!r} e {problem!r}")
    return domain, problem


def load_domain(path: Path | str) -> Domain:
    return parse_domain(Path(path).read_text(encoding="utf-8"))


def load_problem(path: Path | str, domain: Domain) -> ProblemSpec:
    return parse_problem(Path(path).read_text(encoding="utf-8"), domain)


def bundled_text(filename: str) -> str:
    """Conteúdo de um arquivo empacotado em `plan_replay.data`."""
    resource = resources.files("plan_replay.data").joinpath(filename)
    return resource.read_text(encoding="utf-8")


def load_bundled_domain(filename: str) -> Domain:
    return parse_domain(bundled_text(filename))


def domain_to_sexpr(domain: Domain) -> list:
    actions = []
    for s in domain.schemas:
        constraints = [list(p) for p in s.equals]
        constraints += [["NOT", list(p)] for p in s.not_equals]
        actions.append(
            [
                ":action",
                s.name,
                ":parameters",
                list(s.params),
                ":precondition",
                [literal_to_sexpr(p) for p in s.precond],
                ":add",
                [literal_to_sexpr(a) for a in s.add],
                ":delete",
                [literal_to_sexpr(d) for d in s.delete],
                ":equals",
                constraints,
            ]
        )
    return ["define", ["domain", domain.name], *actions]


def problem_to_sexpr(problem: ProblemSpec) -> list:
    return [
        "define",
        ["problem", problem.name],
        [":domain", problem.domain.name],
        [":init", *(literal_to_sexpr(lit) for lit in sorted(problem.init))],
        [":goal", *(literal_to_sexpr(g) for g in problem.goals)],
    ]


# ============================================================================
# Arquivos de entrada
# ============================================================================

# Domínios empacotados, pelo nome declarado em (define (domain ...))
BUNDLED_DOMAINS = {
    "LOGISTICS": "logistics.sexp",
    "LOGISTICS-ROUTE-RESTRICTED": "logistics-route-restricted.sexp",
    "BLOCKS": "blocks.sexp",
    "THETA2-5": "theta2.sexp",
}


def read_source(source: Path | str) -> str:
    """Lê um caminho; se não existir, procura um arquivo empacotado com esse nome."""
    path = Path(source)
    if path.exists():
        return path.read_text(encoding="utf-8")
    try:
        return bundled_text(path.name)
    except (FileNotFoundError, OSError) as e:
        raise FileNotFoundError(f"Arquivo não encontrado: {source}") from e


def _declared_domain(problem: SList) -> str | None:
    for item in problem[2:]:
        section = expect_list(item, "seção do problema")
        if section and expect_symbol(section[0], "seção").lower() == ":domain":
            return str(expect_symbol(_nth(section, 1, "domínio"), "domínio"))
    return None


def load_problem_source(
    problem_source: Path | str, domain_source: Path | str | None = None
) -> tuple[Domain, ProblemSpec]:
    """
    Domínio e problema para a CLI.

    Sem `domain_source`, usa o domínio definido no próprio arquivo ou o domínio
    empacotado com o nome declarado em `:domain`.
    """
    text = read_source(problem_source)
    if domain_source is not None:
        domain = parse_domain(read_source(domain_source))
        return domain, parse_problem(text, domain)

    domains, problems = _defines(text)
    if domains:
        return parse_domain_and_problem(text)
    if len(problems) != 1:
        raise DomainValidationError(
            f"Esperado um problema, encontrados {len(problems)}"
        )
    declared = _declared_domain(problems[0])
    if declared is None or declared.upper() not in BUNDLED_DOMAINS:
        raise DomainValidationError(
            f"Domínio '{declared}' não empacotado; informe o arquivo do domínio"
        )
    domain = load_bundled_domain(BUNDLED_DOMAINS[declared.upper()])
    return domain, _parse_problem_expr(problems[0], domain)
