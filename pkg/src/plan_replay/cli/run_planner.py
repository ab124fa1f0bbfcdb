"""CLI do planejador: solve, train, retrieve, explain e bench."""

from __future__ import annotations

import dataclasses
import time
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from plan_replay.domain_configs import (
    AVAILABLE_DOMAINS,
    BaseDomainConfig,
    load_domain_config,
)
from plan_replay.errors import PlanReplayError
from plan_replay.models import (
    ProblemSpec,
    ReplayMode,
    RetrievalResult,
    SearchLimits,
    SearchStrategy,
)
from plan_replay.parsers import load_problem_source
from plan_replay.parsers.experiment import load_bundled_experiment, load_experiment
from plan_replay.parsers.trace import serialize_reason
from plan_replay.processors import (
    Episode,
    MetricsAggregator,
    Trainer,
    run_experiment,
    solve_episode,
)
from plan_replay.storage import CaseLibrary, LocalBackend, MetricsStorage
from plan_replay.utils import get_logger, get_settings, setup_logging

logger = get_logger(__name__)
console = Console()

app = typer.Typer(
    help="Planejador de ordem parcial com replay derivacional e biblioteca de casos.",
    add_completion=False,
    no_args_is_help=True,
)

EXIT_ERROR = 1
EXIT_UNSOLVED = 2


# ============================================================================
# Opções comuns
# ============================================================================

ProblemArg = typer.Argument(
    None, help="Arquivo do problema (ou nome de um arquivo empacotado)"
)
ProblemOpt = typer.Option(None, "--problem", help="Arquivo do problema")
ConfigDomainOpt = typer.Option(
    None,
    "--config-domain",
    help=f"Gera o problema: {', '.join(AVAILABLE_DOMAINS)}",
)
GoalsOpt = typer.Option(1, "--goals", min=1, help="Metas do problema gerado")
SeedOpt = typer.Option(0, "--seed", help="Semente da geração")
DomainOpt = typer.Option(
    None, "--domain", help="Arquivo do domínio (padrão: o do próprio problema)"
)
LibraryOpt = typer.Option(
    None,
    "--library",
    help="Diretório da biblioteca (padrão: $PLAN_REPLAY_LIBRARY_DIR)",
)
StrategyOpt = typer.Option(None, "--strategy", help="best-first | dfs | iddfs")
StepBoundOpt = typer.Option(None, "--step-bound", min=1, help="Limite de passos")
NodeBudgetOpt = typer.Option(None, "--node-budget", min=1, help="Orçamento de nós")
TimeBudgetOpt = typer.Option(None, "--time-budget", help="Orçamento de tempo (s)")
CsvOpt = typer.Option(None, "--csv", help="Arquivo CSV de métricas")
LogLevelOpt = typer.Option(None, "--log-level", help="DEBUG | INFO | WARNING | ERROR")


def _setup(log_level: str | None, run_name: str | None = None) -> Path | None:
    settings = get_settings()
    level = (log_level or settings.log_level).upper()
    return setup_logging(
        level=level,
        log_file=settings.log_file,
        log_dir=settings.log_dir,
        run_name=run_name,
    )


@contextmanager
def _handle_errors() -> Iterator[None]:
    try:
        yield
    except (PlanReplayError, ValueError, FileNotFoundError) as e:
        logger.error(f"❌ {e}")
        console.print(f"[bold red]❌ Erro: {e}[/bold red]")
        raise typer.Exit(EXIT_ERROR)


def _strategy(value: str | None) -> SearchStrategy:
    return SearchStrategy(value) if value else get_settings().strategy


def _limits(
    n_goals: int,
    step_bound: int | None,
    node_budget: int | None,
    time_budget: float | None,
) -> SearchLimits:
    settings = get_settings()
    return SearchLimits.for_goals(
        n_goals,
        node_budget or settings.node_budget,
        time_budget if time_budget is not None else settings.time_budget,
        step_bound,
    )


def _load_spec(
    problem: str | None,
    problem_file: str | None,
    domain: str | None,
    config: BaseDomainConfig | None,
    goals: int,
    seed: int,
) -> ProblemSpec:
    """Problema do argumento, de `--problem` ou gerado por `--config-domain`."""
    sources = [s for s in (problem, problem_file) if s is not None]
    if len(sources) > 1:
        raise ValueError("Problema informado duas vezes (argumento e --problem)")
    if sources and config is not None:
        raise ValueError("--config-domain não se combina com um arquivo de problema")
    if sources:
        return load_problem_source(sources[0], domain)[1]
    if config is None:
        raise ValueError("Informe o problema, --problem ou --config-domain")
    return config.generate_problem(goals, seed)


def _config(name: str | None, step_bound: int | None) -> BaseDomainConfig | None:
    return load_domain_config(name)(step_bound=step_bound) if name else None


def _step_bound(
    config: BaseDomainConfig | None, n_goals: int, step_bound: int | None
) -> int | None:
    return config.step_bound(n_goals) if config is not None else step_bound


def _open_library(library_dir: Path | None) -> CaseLibrary:
    settings = get_settings()
    path = library_dir or settings.library_dir
    logger.info(f"📁 Biblioteca em {path}")
    return CaseLibrary.load(LocalBackend(base_path=path), settings.repair_depth_limit)


def _save_csv(path: Path, rows, summary=None, parquet: bool = False) -> dict[str, str]:
    storage = MetricsStorage(LocalBackend(base_path=path.parent))
    return storage.save(rows, path.stem, summary=summary, parquet=parquet)


# ============================================================================
# Exibição
# ============================================================================


def display_config(title: str, values: dict[str, object]) -> None:
    table = Table(title=f"⚙️  {title}", show_header=False)
    table.add_column("Parâmetro", style="cyan", width=22)
    table.add_column("Valor", style="green")
    for key, value in values.items():
        table.add_row(key, str(value))
    console.print(table)
    console.print()


def display_episode(episode: Episode) -> None:
    solution = episode.solution
    if solution is not None:
        plan = Table(title="📋 Plano", show_header=True)
        plan.add_column("#", style="dim", width=4)
        plan.add_column("Ação", style="green")
        for i, action in enumerate(solution.actions, start=1):
            plan.add_row(str(i), str(action))
        console.print(plan)

    status = (
        "[bold green]✅ RESOLVIDO[/bold green]"
        if episode.solved
        else "[bold red]❌ NÃO RESOLVIDO[/bold red]"
    )
    length = solution.length if solution is not None else "-"
    panel = Panel.fit(
        f"""
{status}

[cyan]Busca:[/cyan]
  • Modo: [bold]{episode.mode.value}[/bold]
  • Passos no plano: [bold]{length}[/bold]
  • Nós visitados: [bold]{episode.stats.nodes_visited}[/bold]
  • Orçamento esgotado: [bold]{'sim' if episode.budget_exceeded else 'não'}[/bold]

[cyan]Replay:[/cyan]
  • Seq: [bold]{'sim' if episode.metrics.seq else 'não'}[/bold]
  • Der: [bold]{episode.metrics.der:.0%}[/bold]
  • Rep: [bold]{episode.metrics.rep:.0%}[/bold]

[cyan]Tempo:[/cyan]
  • Total: [bold]{episode.wall_time:.3f}s[/bold]
  • Recuperação: [bold]{episode.retrieval.retrieval_time:.4f}s[/bold]
        """,
        title="📊 Resultados",
        border_style="green" if episode.solved else "red",
    )
    console.print(panel)


def display_retrieval(result: RetrievalResult) -> None:
    table = Table(title="🔎 Casos recuperados", show_header=True)
    table.add_column("Caso", style="cyan", width=6)
    table.add_column("Metas cobertas", style="green")
    table.add_column("Substituição", style="dim")
    for instance in result.instances:
        table.add_row(
            str(instance.case.case_id),
            " ".join(str(g) for g in instance.covered),
            " ".join(f"{var}={value}" for var, value in instance.substitution),
        )
    console.print(table)
    uncovered = " ".join(str(g) for g in result.uncovered) or "-"
    console.print(f"  • Metas não cobertas: [bold]{uncovered}[/bold]")
    elapsed = f"{result.retrieval_time:.4f}s"
    console.print(f"  • Tempo de recuperação: [bold]{elapsed}[/bold]")


def display_summary(summary) -> None:
    table = Table(title="📊 Resumo por fase", show_header=True)
    for column in summary.columns:
        table.add_column(column, style="cyan" if column in ("phase", "mode") else None)
    for record in summary.itertuples(index=False):
        table.add_row(
            *(f"{v:.2f}" if isinstance(v, float) else str(v) for v in record)
        )
    console.print(table)


# ============================================================================
# Comandos
# ============================================================================


def display_domain_config(config: BaseDomainConfig) -> None:
    display_config("Gerador", {f"🏭 {k}": v for k, v in config.describe().items()})


@app.command()
def solve(
    problem: Optional[str] = ProblemArg,
    problem_file: Optional[str] = ProblemOpt,
    domain: Optional[str] = DomainOpt,
    config_domain: Optional[str] = ConfigDomainOpt,
    goals: int = GoalsOpt,
    seed: int = SeedOpt,
    library: Optional[Path] = LibraryOpt,
    mode: ReplayMode = typer.Option(ReplayMode.SCRATCH, "--mode"),
    strategy: Optional[str] = StrategyOpt,
    step_bound: Optional[int] = StepBoundOpt,
    node_budget: Optional[int] = NodeBudgetOpt,
    time_budget: Optional[float] = TimeBudgetOpt,
    csv: Optional[Path] = CsvOpt,
    log_level: Optional[str] = LogLevelOpt,
) -> None:
    """Resolve um problema (de arquivo ou gerado) em um modo e mostra o plano."""
    _setup(log_level)
    with _handle_errors():
        config = _config(config_domain, step_bound)
        spec = _load_spec(problem, problem_file, domain, config, goals, seed)
        n_goals = len(spec.goals)
        bound = _step_bound(config, n_goals, step_bound)
        limits = _limits(n_goals, bound, node_budget, time_budget)
        case_library = _open_library(library) if mode.uses_library else None
        if config is not None:
            display_domain_config(config)
        display_config(
            "Configuração",
            {
                "🧩 Problema": spec.name,
                "🌐 Domínio": spec.domain.name,
                "🎯 Metas": n_goals,
                "🔁 Modo": mode.value,
                "🧭 Estratégia": _strategy(strategy).value,
                "📏 Limite de passos": limits.step_bound,
                "🔢 Orçamento de nós": limits.node_budget,
            },
        )
        episode = solve_episode(
            spec,
            mode,
            case_library,
            _strategy(strategy),
            limits,
            get_settings().check_systematicity,
        )
        display_episode(episode)
        if csv is not None:
            size = len(case_library) if case_library is not None else 0
            _save_csv(csv, [episode.to_row(phase=n_goals, library_size=size)])

    if not episode.solved:
        raise typer.Exit(EXIT_UNSOLVED)


@app.command()
def train(
    problems: Optional[list[str]] = typer.Argument(
        None, help="Arquivos de problema usados no treino"
    ),
    domain: Optional[str] = DomainOpt,
    library: Optional[Path] = LibraryOpt,
    config_domain: Optional[str] = ConfigDomainOpt,
    count: int = typer.Option(10, "--count", min=1, help="Problemas gerados"),
    goals: int = GoalsOpt,
    seed: int = SeedOpt,
    strategy: Optional[str] = StrategyOpt,
    step_bound: Optional[int] = StepBoundOpt,
    node_budget: Optional[int] = NodeBudgetOpt,
    time_budget: Optional[float] = TimeBudgetOpt,
    log_level: Optional[str] = LogLevelOpt,
) -> None:
    """Constrói a biblioteca de casos a partir de um conjunto de problemas."""
    _setup(log_level)
    with _handle_errors():
        specs: list[ProblemSpec] = []
        config = _config(config_domain, step_bound)
        if config is not None:
            display_domain_config(config)
            specs = [config.generate_problem(goals, seed + i) for i in range(count)]

        def limits_for(n_goals: int) -> SearchLimits:
            bound = _step_bound(config, n_goals, step_bound)
            return _limits(n_goals, bound, node_budget, time_budget)

        specs += [load_problem_source(p, domain)[1] for p in problems or []]
        if not specs:
            raise ValueError("Informe arquivos de problema ou --config-domain")

        case_library = _open_library(library)
        trainer = Trainer(
            case_library,
            _strategy(strategy),
            limits_for,
            get_settings().check_systematicity,
        )
        started = time.perf_counter()
        report = trainer.train(specs)
        elapsed = time.perf_counter() - started

        table = Table(title="🏗️  Treino", show_header=False)
        table.add_column("Métrica", style="cyan", width=22)
        table.add_column("Valor", style="green")
        table.add_row("Problemas", str(len(specs)))
        for result, n in sorted(report.results.items(), key=lambda kv: kv[0].value):
            table.add_row(f"  {result.value}", str(n))
        stats = case_library.stats()
        table.add_row("Casos", str(stats.cases))
        table.add_row("  de topo", str(stats.top_level))
        table.add_row("  de reparo", str(stats.repairs))
        table.add_row("Anotações", str(stats.annotations))
        table.add_row("Tempo", f"{elapsed:.2f}s")
        console.print(table)


@app.command()
def retrieve(
    problem: Optional[str] = ProblemArg,
    problem_file: Optional[str] = ProblemOpt,
    domain: Optional[str] = DomainOpt,
    config_domain: Optional[str] = ConfigDomainOpt,
    goals: int = GoalsOpt,
    seed: int = SeedOpt,
    library: Optional[Path] = LibraryOpt,
    mode: ReplayMode = typer.Option(ReplayMode.STATIC, "--mode"),
    log_level: Optional[str] = LogLevelOpt,
) -> None:
    """Mostra os casos que a biblioteca recupera para um problema."""
    _setup(log_level)
    with _handle_errors():
        config = _config(config_domain, None)
        spec = _load_spec(problem, problem_file, domain, config, goals, seed)
        result = _open_library(library).retrieve(spec, mode)
        display_retrieval(result)


@app.command()
def explain(
    problem: Optional[str] = ProblemArg,
    problem_file: Optional[str] = ProblemOpt,
    domain: Optional[str] = DomainOpt,
    config_domain: Optional[str] = ConfigDomainOpt,
    goals: int = GoalsOpt,
    seed: int = SeedOpt,
    library: Optional[Path] = LibraryOpt,
    mode: ReplayMode = typer.Option(ReplayMode.STATIC, "--mode"),
    strategy: Optional[str] = StrategyOpt,
    step_bound: Optional[int] = StepBoundOpt,
    node_budget: Optional[int] = NodeBudgetOpt,
    time_budget: Optional[float] = TimeBudgetOpt,
    log_level: Optional[str] = LogLevelOpt,
) -> None:
    """Adapta os casos recuperados e mostra a razão de falha do replay."""
    _setup(log_level)
    with _handle_errors():
        config = _config(config_domain, step_bound)
        spec = _load_spec(problem, problem_file, domain, config, goals, seed)
        bound = _step_bound(config, len(spec.goals), step_bound)
        limits = _limits(len(spec.goals), bound, node_budget, time_budget)
        episode = solve_episode(
            spec,
            mode,
            _open_library(library),
            _strategy(strategy),
            limits,
            get_settings().check_systematicity,
        )
        reason = episode.failure_reason
        if reason is None:
            console.print("[green]✓ Nenhuma razão de falha[/green]")
        else:
            console.print(
                Panel.fit(
                    f"{serialize_reason(reason)}\n\n"
                    f"[cyan]Sólida:[/cyan] [bold]{'sim' if reason.sound else 'não'}"
                    "[/bold]",
                    title="🧠 Razão de falha",
                    border_style="yellow",
                )
            )

    if not episode.solved:
        raise typer.Exit(EXIT_UNSOLVED)


@app.command()
def bench(
    experiment: str = typer.Argument(
        ..., help="Arquivo de experimento (ou nome de um arquivo empacotado)"
    ),
    library: Optional[Path] = typer.Option(
        None, "--library", help="Persiste a biblioteca neste diretório"
    ),
    node_budget: Optional[int] = NodeBudgetOpt,
    time_budget: Optional[float] = TimeBudgetOpt,
    seed: Optional[int] = typer.Option(None, "--seed", help="Sobrescreve a semente"),
    csv: Optional[Path] = CsvOpt,
    parquet: bool = typer.Option(False, "--parquet", help="Também grava Parquet"),
    log_level: Optional[str] = LogLevelOpt,
) -> None:
    """Executa um experimento e grava as métricas em CSV."""
    _setup(log_level)
    with _handle_errors():
        if Path(experiment).exists():
            spec = load_experiment(experiment)
        else:
            spec = load_bundled_experiment(experiment)
        log_path = _setup(log_level, run_name=spec.name)
        overrides = {
            key: value
            for key, value in (
                ("node_budget", node_budget),
                ("time_budget", time_budget),
                ("seed", seed),
            )
            if value is not None
        }
        if overrides:
            spec = dataclasses.replace(spec, **overrides)

        display_config(
            "Experimento",
            {
                "🧪 Nome": spec.name,
                **{f"🌐 {k}": v for k, v in spec.config.describe().items()},
                "🏗️  Protocolo": spec.protocol.value,
                "🎯 Fases": " ".join(str(p) for p in spec.phases),
                "🧩 Problemas/fase": spec.problems_per_phase,
                "🔁 Modos": " ".join(m.value for m in spec.modes),
                "🔢 Orçamento de nós": spec.node_budget,
                "🌱 Semente": spec.seed,
                "📝 Log": log_path or "-",
            },
        )
        case_library = (
            CaseLibrary.load(LocalBackend(base_path=library))
            if library is not None
            else None
        )
        result = run_experiment(
            spec, case_library, get_settings().check_systematicity
        )
        summary = MetricsAggregator.summarize(result.rows)
        display_summary(summary)

        output = csv or Path("results") / f"{spec.name}.csv"
        written = _save_csv(output, result.rows, summary=summary, parquet=parquet)
        for kind, path in written.items():
            console.print(f"  • {kind}: [dim]{path}[/dim]")


def main() -> None:
    app()


if __name__ == "__main__":
    main()
