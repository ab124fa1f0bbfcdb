"""End-to-end learning properties on the θ2 domain."""

from itertools import combinations

import pytest

from plan_replay.core import adapt, reason_holds
from plan_replay.domain_configs import Theta2Config
from plan_replay.domain_configs.theta2 import ALPHA_GOAL
from plan_replay.models import Literal, ReplayMode, SearchLimits, Sequenced
from plan_replay.parsers.experiment import load_bundled_experiment
from plan_replay.processors import ExperimentRunner, train
from plan_replay.storage import CaseLibrary

pytestmark = pytest.mark.slow

MODES = (ReplayMode.SCRATCH, ReplayMode.STATIC, ReplayMode.LEARNING)
PHASES = (2, 3, 4)


@pytest.fixture(scope="module")
def theta2_bench():
    """Experimento empacotado completo: 10 problemas por fase, fases 2 a 4."""
    runner = ExperimentRunner(load_bundled_experiment("theta2-bench.sexp"))
    return runner, runner.run()


@pytest.fixture(scope="module")
def failure_driven_result(theta2_bench):
    return theta2_bench[1]


# ==========================================================
# Aprendizado por falhas
# ==========================================================


def test_full_test_sets(failure_driven_result):
    assert failure_driven_result.test_set_sizes == {phase: 10 for phase in PHASES}


def test_learning_always_sequences(failure_driven_result):
    """Testa %Seq = 100 no aprendizado e 0 no replay estático, em cada fase."""
    summary = failure_driven_result.summary.set_index(["phase", "mode"])
    for phase in PHASES:
        assert summary.loc[(phase, "learning"), "pct_seq"] == 100.0
        assert summary.loc[(phase, "static"), "pct_seq"] == 0.0


def test_all_modes_solve_the_same_problems(failure_driven_result):
    by_mode = {
        mode: [r.problem_id for r in failure_driven_result.rows if r.mode == mode.value]
        for mode in MODES
    }
    assert by_mode[ReplayMode.SCRATCH] == by_mode[ReplayMode.LEARNING]
    assert by_mode[ReplayMode.SCRATCH] == by_mode[ReplayMode.STATIC]
    assert all(r.solved for r in failure_driven_result.rows)


@pytest.mark.parametrize("phase", PHASES)
def test_node_count_ordering(failure_driven_result, phase):
    """Testa aprendizado <= estático <= do zero em nós visitados por fase."""
    summary = failure_driven_result.summary.set_index(["phase", "mode"])
    learning = summary.loc[(phase, "learning"), "total_nodes"]
    static = summary.loc[(phase, "static"), "total_nodes"]
    scratch = summary.loc[(phase, "scratch"), "total_nodes"]

    assert learning <= static <= scratch
    if phase >= 3:
        assert learning <= 0.5 * scratch


def test_scratch_rows_have_no_retrieval_time(failure_driven_result):
    scratch = [r for r in failure_driven_result.rows if r.mode == "scratch"]
    assert all(r.retrieval_time == 0.0 for r in scratch)


def test_censored_case_alone_never_sequences(theta2_bench):
    """Testa que nenhum caso com razão sólida que vale é estendido sem recuperação."""
    runner, _ = theta2_bench
    library = runner.library
    annotated = {
        case.case_id: [a.reason for a in case.annotations if a.reason.sound]
        for case in library
    }
    annotated = {case_id: reasons for case_id, reasons in annotated.items() if reasons}
    assert annotated, "Treino sem razões sólidas"

    phase = max(PHASES)
    limits = runner.spec.limits(phase)
    checked = 0
    for seed in range(2000):
        if checked >= 20:
            break
        problem = runner.spec.config.generate_problem(phase, seed)
        for instance in library.retrieve(problem, ReplayMode.STATIC).instances:
            reasons = annotated.get(instance.case.case_id, [])
            if not any(reason_holds(r, problem, instance.mapping) for r in reasons):
                continue
            outcome, metrics = adapt(problem, [instance], limits=limits)
            assert not isinstance(outcome, Sequenced), problem.name
            assert not metrics.seq
            checked += 1

    assert checked >= 20
    library.check_invariants()


# ==========================================================
# Tamanho da biblioteca
# ==========================================================


def test_library_bound_with_alpha_goal():
    """Testa o limite de 2m + 1 casos com todos os problemas de 2 e 3 metas."""
    config = Theta2Config(m=5)
    regular = [Literal(f"G{i}") for i in range(1, 6)]
    problems = [
        config.make_problem((*goals, ALPHA_GOAL), f"alpha-{size}-{index}")
        for size in (1, 2)
        for index, goals in enumerate(combinations(regular, size))
    ]
    library = CaseLibrary()

    def limits(n_goals):
        return SearchLimits(step_bound=config.step_bound(n_goals))

    history = train(problems, library, limits=limits)

    assert len(history) == 15
    assert len(library) <= 11
    library.check_invariants()


def test_retraining_keeps_library_size():
    """Testa que retreinar o mesmo conjunto não guarda casos novos."""
    config = Theta2Config(m=5)
    problems = [config.generate_problem(3, seed) for seed in range(6)]
    library = CaseLibrary()
    limits = SearchLimits(step_bound=config.step_bound(3))

    first = train(problems, library, limits=limits)
    second = train(problems, library, limits=limits)

    assert second == [first[-1]] * len(problems)
