"""Tests for the s-expression parsers, literals, bindings and the executor."""

import pytest

from plan_replay.core.executor import ExecutionFailure, entails, execute
from plan_replay.errors import DomainValidationError, ParseError
from plan_replay.models import (
    BindingSet,
    Codesignation,
    GroundAction,
    Literal,
    UnifyFailure,
    positional_pattern,
    unify,
)
from plan_replay.parsers import load_problem_source, parse_domain, parse_problem
from plan_replay.parsers.domain import domain_to_sexpr, problem_to_sexpr
from plan_replay.parsers.sexpr import dumps, parse

# ==========================================================
# Parser
# ==========================================================


def test_logistics_domain_shape(logistics):
    """Testa esquemas, constantes e condições de filtro do domínio logístico."""
    names = [s.name for s in logistics.schemas]
    assert names == [
        "LOAD-TRUCK",
        "LOAD-PLANE",
        "UNLOAD-TRUCK",
        "UNLOAD-PLANE",
        "DRIVE-TRUCK",
        "FLY-PLANE",
    ]
    assert logistics.constants == frozenset({"AIRPORT"})
    assert logistics.is_filter(Literal("IS-A", ("AIRPORT", "l_d")))
    assert logistics.is_filter(Literal("SAME-CITY", ("a", "b")))
    assert not logistics.is_filter(Literal("AT-OB", ("OB1", "l_d")))

    fly = logistics.schema("FLY-PLANE")
    assert fly.delete == (Literal("AT-PL", ("?P", "?Li")),)
    assert fly.not_equals == (("?Li", "?Lg"),)


def test_problem_parse(one_package):
    """Testa estado inicial e metas do problema de um pacote."""
    assert one_package.name == "ONE-PACKAGE"
    assert one_package.goals == (Literal("AT-OB", ("OB1", "l_d")),)
    assert Literal("AT-PL", ("PL1", "l_p")) in one_package.init
    assert len(one_package.filter_conditions) == 3


def test_domain_round_trip(logistics, one_package):
    """Testa que domínio e problema reescritos são lidos de volta iguais."""
    domain = parse_domain(dumps(domain_to_sexpr(logistics)))
    assert domain == logistics
    problem = parse_problem(dumps(problem_to_sexpr(one_package)), domain)
    assert problem.init == one_package.init
    assert problem.goals == one_package.goals


def test_parse_error_carries_position():
    """Testa que erros de sintaxe indicam linha e coluna."""
    with pytest.raises(ParseError) as info:
        parse("(define (domain X)\n  (:action A")
    assert info.value.line == 2
    assert info.value.column == 3


def test_unbound_variable_rejected():
    """Testa rejeição de variável usada fora de :parameters."""
    text = """
    (define (domain BAD)
      (:action A :parameters (?x) :precondition ((P ?y)) :add ((Q ?x))))
    """
    with pytest.raises(DomainValidationError, match="variável não ligada"):
        parse_domain(text)


def test_arity_mismatch_rejected():
    """Testa rejeição de predicado com aridades diferentes."""
    text = """
    (define (domain BAD)
      (:action A :parameters (?x) :precondition ((P ?x)) :add ((P ?x ?x))))
    """
    with pytest.raises(DomainValidationError, match="Aridade"):
        parse_domain(text)


def test_problem_domain_mismatch(theta2):
    """Testa problema que declara outro domínio."""
    text = "(define (problem X) (:domain LOGISTICS) (:init (I1)) (:goal (G1)))"
    with pytest.raises(DomainValidationError):
        parse_problem(text, theta2)


def test_load_problem_source_uses_bundled_domain():
    """Testa que o domínio declarado em :domain é encontrado entre os empacotados."""
    domain, problem = load_problem_source("two-packages.sexp")
    assert domain.name == "LOGISTICS-ROUTE-RESTRICTED"
    assert len(problem.goals) == 2


def test_load_problem_source_unknown_domain(tmp_path):
    """Testa problema de domínio não empacotado sem arquivo de domínio."""
    path = tmp_path / "p.sexp"
    path.write_text("(define (problem X) (:domain NOPE) (:init) (:goal (G1)))")
    with pytest.raises(DomainValidationError, match="NOPE"):
        load_problem_source(path)


# ==========================================================
# Literais e codesignação
# ==========================================================


def test_positional_pattern_keeps_repetitions():
    """Testa renomeação posicional com repetição e constantes preservadas."""
    lit = Literal("R", ("a", "?x", "a", "AIRPORT"))
    assert positional_pattern(lit, frozenset({"AIRPORT"})) == Literal(
        "R", ("?0", "?1", "?0", "AIRPORT")
    )


def test_unify_extends_bindings():
    """Testa unificação mínima e leitura do valor da classe."""
    result = unify(
        Literal("AT-PL", ("?P.1", "?L.1")),
        Literal("AT-PL", ("PL1", "l_p")),
        BindingSet(),
    )
    assert isinstance(result, BindingSet)
    assert result.value("?P.1") == "PL1"
    assert result.value("?L.1") == "l_p"


def test_unify_clash_and_distinct():
    """Testa falhas por constantes diferentes e por restrição de distinção."""
    clash = unify(Literal("P", ("a",)), Literal("P", ("b",)), BindingSet())
    assert isinstance(clash, UnifyFailure) and clash.kind == "clash"

    bindings = BindingSet(frozenset({Codesignation.of("?x", "?y", equal=False)}))
    bindings = bindings.extend((Codesignation.of("?y", "c"),))
    distinct = unify(Literal("P", ("?x",)), Literal("P", ("c",)), bindings)
    assert isinstance(distinct, UnifyFailure) and distinct.kind == "distinct"


def test_value_prefers_constant():
    """Testa que o valor de uma classe é sua constante ou a menor variável."""
    bindings = BindingSet().extend(
        (Codesignation.of("?b", "?a"), Codesignation.of("?a", "k"))
    )
    assert bindings.value("?b") == "k"
    assert BindingSet().extend((Codesignation.of("?b", "?a"),)).value("?b") == "?a"


# ==========================================================
# Executor
# ==========================================================


def test_execute_plan(logistics, one_package):
    """Testa execução STRIPS do plano de quatro passos."""
    fly, load, unload = (
        logistics.schema(n) for n in ("FLY-PLANE", "LOAD-PLANE", "UNLOAD-PLANE")
    )
    plan = [
        GroundAction(fly, ("PL1", "l_p", "l_i")),
        GroundAction(load, ("OB1", "PL1", "l_i")),
        GroundAction(fly, ("PL1", "l_i", "l_d")),
        GroundAction(unload, ("OB1", "PL1", "l_d")),
    ]
    state = execute(plan, one_package.init)
    assert isinstance(state, frozenset)
    assert entails(state, one_package.goals)
    assert Literal("AT-PL", ("PL1", "l_p")) not in state


def test_execute_reports_first_failure(logistics, one_package):
    """Testa falha na primeira ação cuja precondição não vale."""
    load = logistics.schema("LOAD-PLANE")
    result = execute([GroundAction(load, ("OB1", "PL1", "l_i"))], one_package.init)
    assert isinstance(result, ExecutionFailure)
    assert result.index == 1
    assert Literal("AT-PL", ("PL1", "l_i")) in result.missing


def test_execute_rejects_violated_constraint(logistics, one_package):
    """Testa restrição de distinção violada em ação aterrada."""
    fly = logistics.schema("FLY-PLANE")
    result = execute([GroundAction(fly, ("PL1", "l_p", "l_p"))], one_package.init)
    assert isinstance(result, ExecutionFailure)
    assert result.constraint is not None
