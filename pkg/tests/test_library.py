"""Tests for the case library: storage, discrimination net, persistence."""

from itertools import permutations

import pytest

from plan_replay.core import search
from plan_replay.domain_configs.theta2 import ALPHA_GOAL
from plan_replay.errors import LibraryError
from plan_replay.models import (
    CaseAnnotation,
    CaseFailureReason,
    Literal,
    ProblemSpec,
    ReplayMode,
    SearchLimits,
    Solution,
)
from plan_replay.processors import AttemptResult, Trainer, solve_episode
from plan_replay.storage import CaseLibrary, LocalBackend
from plan_replay.storage.library import MANIFEST_FILE, net_key

G1, G2 = Literal("G1"), Literal("G2")
STORED, UNCHANGED = AttemptResult.STORED, AttemptResult.UNCHANGED


# ==========================================================
# Fixtures
# ==========================================================


@pytest.fixture
def one_package_solution(one_package) -> Solution:
    outcome = search(one_package)
    assert isinstance(outcome, Solution)
    return outcome


@pytest.fixture
def stored(library, one_package_solution, one_package):
    """Biblioteca com um caso de topo."""
    case_id = library.store(one_package_solution.trace, one_package)
    assert case_id == 1
    return library


# ==========================================================
# Armazenamento
# ==========================================================


def test_store_lifts_trace(stored):
    """Testa metas e footprint generalizados do caso guardado."""
    case = stored.get(1)

    assert case.goals == (Literal("AT-OB", ("?_OB1", "?_l_d")),)
    assert Literal("AT-OB", ("?_OB1", "?_l_i")) in case.footprint
    assert not case.is_repair
    assert stored.stats().cases == 1
    assert stored.stats().top_level == 1


def test_duplicate_is_not_stored(stored, one_package_solution, one_package):
    """Testa que a mesma derivação não é guardada de novo."""
    assert stored.store(one_package_solution.trace, one_package) is None
    assert len(stored) == 1


def test_repair_requires_failing_case(stored, one_package_solution, one_package):
    """Testa reparo sem o caso que falhou."""
    reason = CaseFailureReason((Literal("AT-OB", ("?_OB1", "?_l_d")),), ())
    with pytest.raises(LibraryError):
        stored.store(one_package_solution.trace, one_package, failure_reason=reason)


def test_get_missing_case(library):
    with pytest.raises(LibraryError, match="42"):
        library.get(42)


def test_invalid_repair_depth_limit():
    with pytest.raises(ValueError):
        CaseLibrary(repair_depth_limit=-1)


# ==========================================================
# Rede de discriminação e recuperação
# ==========================================================


def test_net_key_keeps_domain_constants():
    """Testa a chave de primeiro nível da rede."""
    goal = Literal("IS-A", ("AIRPORT", "l_d"))
    assert net_key(goal, frozenset({"AIRPORT"})) == Literal("IS-A", ("AIRPORT", "?"))


def test_retrieve_from_empty_library(library, one_package):
    """Testa que uma biblioteca vazia deixa todas as metas descobertas."""
    result = library.retrieve(one_package, ReplayMode.STATIC)

    assert not result
    assert result.uncovered == one_package.goals


def test_scratch_mode_ignores_library(stored, one_package):
    result = stored.retrieve(one_package, ReplayMode.SCRATCH)
    assert not result.instances


def test_retrieve_requires_full_footprint(stored, renamed_one_package):
    """Testa que o caso só é recuperado quando o footprint vale em I."""
    assert stored.retrieve(renamed_one_package, "static").instances

    without_plane = ProblemSpec(
        "SEM-AVIAO",
        renamed_one_package.domain,
        frozenset(f for f in renamed_one_package.init if f.predicate != "AT-PL"),
        renamed_one_package.goals,
    )
    result = stored.retrieve(without_plane, ReplayMode.STATIC)
    assert not result.instances
    assert result.uncovered == renamed_one_package.goals


def test_same_goals_in_other_order_not_stored(library, theta2_config):
    """Testa que metas e footprint iguais, em outra ordem, não viram outro caso."""
    variant = theta2_config.training_variant()
    trainer = Trainer(library, limits=SearchLimits(step_bound=3))

    assert trainer.store_scratch(variant.make_problem((G1, G2), "a")) is STORED
    assert trainer.store_scratch(variant.make_problem((G2, G1), "b")) is UNCHANGED
    assert len(library) == 1


@pytest.mark.parametrize("goals", list(permutations((G1, G2, ALPHA_GOAL))))
def test_learning_retrieval_uses_only_repairs(library, theta2_config, goals):
    """Testa que o caso censurado não é trocado por outro caso de topo."""

    def limits(n_goals):
        return SearchLimits(step_bound=theta2_config.step_bound(n_goals))

    variant = theta2_config.training_variant()
    trainer = Trainer(library, limits=limits)
    trainer.store_scratch(variant.make_problem((G1, G2), "treino"))
    trainer.store_scratch(variant.make_problem((G2, G1), "treino-invertido"))
    failing = theta2_config.make_problem((G1, G2, ALPHA_GOAL), "falha")
    assert trainer.attempt(failing) is AttemptResult.REPAIRED

    problem = theta2_config.make_problem(goals, "teste")
    learning = library.retrieve(problem, ReplayMode.LEARNING)
    assert learning.instances
    assert all(inst.case.is_repair for inst in learning.instances)

    episode = solve_episode(
        problem, ReplayMode.LEARNING, library, limits=limits(len(goals))
    )
    assert episode.solved and episode.metrics.seq


# ==========================================================
# Persistência e invariantes
# ==========================================================


def test_persistence_round_trip(stored, backend):
    """Testa manifesto e arquivo de caso gravados e lidos de volta."""
    assert backend.exists(MANIFEST_FILE)
    assert backend.exists(CaseLibrary.case_file(1))

    loaded = CaseLibrary.load(LocalBackend(backend.base_path))
    assert len(loaded) == 1
    original, again = stored.get(1), loaded.get(1)
    assert again.goals == original.goals
    assert again.footprint == original.footprint
    assert again.trace.canonical() == original.trace.canonical()
    assert loaded.repair_depth_limit == stored.repair_depth_limit


def test_load_missing_library(tmp_path):
    """Testa que um diretório sem manifesto vira biblioteca vazia."""
    loaded = CaseLibrary.load(LocalBackend(tmp_path / "nada"), repair_depth_limit=2)
    assert len(loaded) == 0
    assert loaded.repair_depth_limit == 2


def test_clear(stored, backend):
    """Testa que clear esvazia a biblioteca e o manifesto."""
    stored.clear()

    assert len(stored) == 0
    assert len(CaseLibrary.load(backend)) == 0


def test_dangling_annotation_is_rejected(stored):
    """Testa anotação que aponta para um caso inexistente."""
    reason = CaseFailureReason((Literal("AT-OB", ("?_OB1", "?_l_d")),), ())
    stored.get(1).annotations.append(CaseAnnotation(reason, 99))

    with pytest.raises(LibraryError, match="99"):
        stored.check_invariants()
