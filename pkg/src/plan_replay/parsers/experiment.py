"""Leitura de especificações de experimento.

Exemplo::

    (experiment THETA2-BENCH
     :domain theta2
     :config (:m 5)
     :protocol failure-driven
     :phases (2 3 4)
     :problems-per-phase 10
     :modes (scratch static learning)
     :node-budget 50000
     :seed 7)

Chaves de `:config` viram argumentos da classe de configuração do domínio
(`:route-restricted T` -> `route_restricted=True`).
"""

from __future__ import annotations

from pathlib import Path

from plan_replay.domain_configs import load_domain_config
from plan_replay.errors import ExperimentSpecError, ParseError
from plan_replay.models import (
    ExperimentSpec,
    ReplayMode,
    SearchStrategy,
    TrainingProtocol,
)

from .domain import bundled_text
from .sexpr import (
    SExpr,
    SList,
    Symbol,
    expect_list,
    expect_symbol,
    keyword_sections,
    parse,
)

EXPERIMENT_KEYS = {
    ":domain",
    ":config",
    ":protocol",
    ":phases",
    ":problems-per-phase",
    ":training-problems",
    ":modes",
    ":strategy",
    ":node-budget",
    ":time-budget",
    ":step-bound",
    ":seed",
}
NONE = "NIL"
DEFAULT_MODES = (ReplayMode.SCRATCH, ReplayMode.STATIC, ReplayMode.LEARNING)


def _error(message: str, where: SExpr) -> ExperimentSpecError:
    return ExperimentSpecError(f"{message} (linha {where.line}, coluna {where.column})")


def _value(expr: SExpr) -> int | float | bool | str | None:
    """Átomo de configuração: inteiro, real, T/NIL ou símbolo."""
    symbol = expect_symbol(expr, "valor")
    upper = symbol.upper()
    if upper == "T":
        return True
    if upper == NONE:
        return None
    for convert in (int, float):
        try:
            return convert(symbol)
        except ValueError:
            continue
    return str(symbol)


def _int(sections: dict[str, SExpr], key: str, default: int | None) -> int | None:
    if key not in sections:
        return default
    value = _value(sections[key])
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise _error(f"{key} deve ser inteiro", sections[key])
    return value


def _config(domain: Symbol, expr: SExpr):
    try:
        config_class = load_domain_config(str(domain).lower())
    except ValueError as e:
        raise _error(str(e), domain) from e
    items = expect_list(expr, ":config")
    kwargs = {
        key[1:].replace("-", "_"): _value(value)
        for key, value in keyword_sections(items).items()
    }
    try:
        return config_class(**kwargs)
    except (TypeError, ValueError) as e:
        raise _error(f"Configuração inválida para {domain}: {e}", items) from e


def experiment_from_sexpr(expr: SExpr) -> ExperimentSpec:
    items = expect_list(expr, "experimento")
    if len(items) < 2 or expect_symbol(items[0], "cabeçalho").lower() != "experiment":
        raise _error("Esperado (experiment NOME ...)", items)
    name = expect_symbol(items[1], "nome do experimento")
    sections = keyword_sections(items, 2)
    unknown = set(sections) - EXPERIMENT_KEYS
    if unknown:
        raise _error(f"Chaves desconhecidas: {sorted(unknown)}", items)
    for required in (":domain", ":protocol", ":phases", ":problems-per-phase"):
        if required not in sections:
            raise _error(f"Experimento sem {required}", items)

    domain = expect_symbol(sections[":domain"], ":domain")
    config = _config(domain, sections.get(":config", SList()))

    try:
        raw_protocol = expect_symbol(sections[":protocol"], ":protocol")
        protocol = TrainingProtocol(str(raw_protocol).lower())
        modes = DEFAULT_MODES
        if ":modes" in sections:
            raw_modes = expect_list(sections[":modes"], ":modes")
            modes = tuple(
                ReplayMode(str(expect_symbol(m, "modo")).lower()) for m in raw_modes
            )
        raw_strategy = sections.get(":strategy", Symbol("best-first"))
        strategy = SearchStrategy(str(expect_symbol(raw_strategy, ":strategy")))
    except ValueError as e:
        raise _error(str(e), items) from e

    phases = []
    for entry in expect_list(sections[":phases"], ":phases"):
        value = _value(entry)
        if isinstance(value, bool) or not isinstance(value, int):
            raise _error("Fases devem ser inteiras", entry)
        phases.append(value)

    time_budget = None
    if ":time-budget" in sections:
        raw = _value(sections[":time-budget"])
        numeric = isinstance(raw, (int, float)) and not isinstance(raw, bool)
        if raw is not None and not numeric:
            raise _error(":time-budget deve ser numérico", sections[":time-budget"])
        time_budget = float(raw) if raw is not None else None

    try:
        return ExperimentSpec(
            name=str(name),
            config=config,
            protocol=protocol,
            phases=tuple(phases),
            problems_per_phase=_int(sections, ":problems-per-phase", None),
            modes=modes,
            training_problems=_int(sections, ":training-problems", None),
            strategy=strategy,
            node_budget=_int(sections, ":node-budget", 50_000),
            time_budget=time_budget,
            step_bound=_int(sections, ":step-bound", None),
            seed=_int(sections, ":seed", 0),
        )
    except (TypeError, ValueError) as e:
        raise _error(f"Experimento inválido: {e}", items) from e


def parse_experiment(text: str) -> ExperimentSpec:
    try:
        return experiment_from_sexpr(parse(text))
    except ParseError as e:
        raise ExperimentSpecError(str(e)) from e


def load_experiment(path: Path | str) -> ExperimentSpec:
    return parse_experiment(Path(path).read_text(encoding="utf-8"))


def load_bundled_experiment(filename: str) -> ExperimentSpec:
    return parse_experiment(bundled_text(filename))
