"""Tests for the benchmark domain configurations and problem generators."""

from collections import Counter

import pytest

from plan_replay.domain_configs import (
    BlocksConfig,
    LogisticsConfig,
    Theta2Config,
    build_theta2_domain,
    load_domain_config,
)
from plan_replay.models import Literal
from plan_replay.parsers.domain import load_bundled_domain

# ==========================================================
# Registro
# ==========================================================


def test_load_domain_config():
    """Testa o registro de domínios e o erro para nomes desconhecidos."""
    assert load_domain_config("theta2") is Theta2Config
    with pytest.raises(ValueError, match="Disponíveis"):
        load_domain_config("satellite")


# ==========================================================
# Logística
# ==========================================================


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_logistics_initial_state_is_exclusive(seed):
    """Testa que cada pacote e cada avião ocupam exatamente um lugar."""
    config = LogisticsConfig(cities=3, planes=2, trucks=3, packages=4)
    problem = config.generate_problem(3, seed)

    packages = Counter(f.args[0] for f in problem.init if f.predicate == "AT-OB")
    planes = Counter(f.args[0] for f in problem.init if f.predicate == "AT-PL")
    assert set(packages.values()) == {1} and len(packages) == 4
    assert set(planes.values()) == {1} and len(planes) == 2
    airports = {f.args[1] for f in problem.init if f.predicate == "IS-A"}
    assert all(f.args[1] in airports for f in problem.init if f.predicate == "AT-PL")
    assert len(problem.goals) == 3
    for goal in problem.goals:
        assert goal not in problem.init, "Metas não podem já valer no início"


def test_logistics_generation_is_deterministic():
    """Testa que a mesma semente gera o mesmo problema."""
    config = LogisticsConfig(cities=3, planes=2, packages=4)
    a, b = config.generate_problem(2, 42), config.generate_problem(2, 42)

    assert a.init == b.init and a.goals == b.goals
    assert a.name == "logistics-2g-s42"


def test_logistics_route_restricted_same_destination():
    """Testa a variante sem caminhões com destino comum."""
    config = LogisticsConfig(
        cities=4, planes=1, packages=3, route_restricted=True, same_destination=True
    )
    problem = config.generate_problem(2, 3)

    assert problem.domain.name == "LOGISTICS-ROUTE-RESTRICTED"
    assert not any(f.predicate == "AT-TR" for f in problem.init)
    assert len({g.args[1] for g in problem.goals}) == 1


def test_logistics_rejects_too_many_goals():
    config = LogisticsConfig(packages=2)
    with pytest.raises(ValueError, match="pacotes"):
        config.generate_problem(3, 0)


def test_logistics_step_bound():
    """Testa a regra 3 + 4 por meta e o limite fixo."""
    assert LogisticsConfig().step_bound(2) == 11
    assert LogisticsConfig(step_bound=9).step_bound(2) == 9


# ==========================================================
# θ2
# ==========================================================


def test_theta2_builder_matches_bundled_file():
    """Testa que o gerador de esquemas e o arquivo empacotado coincidem."""
    assert build_theta2_domain(5) == load_bundled_domain("theta2.sexp")


def test_theta2_problems_include_alpha(theta2_config):
    """Testa G-ALPHA entre as metas e P-ALPHA no estado inicial."""
    problem = theta2_config.generate_problem(3, 11)

    assert Literal("G-ALPHA") in problem.goals
    assert len(problem.goals) == 3
    assert Literal("P-ALPHA") in problem.init


def test_theta2_training_variant(theta2_config):
    """Testa que a variante de treino não tem G-ALPHA nem P-ALPHA."""
    problem = theta2_config.training_variant().generate_problem(2, 5)

    assert Literal("G-ALPHA") not in problem.goals
    assert Literal("P-ALPHA") not in problem.init
    assert Literal("P-BETA") in problem.init


@pytest.mark.parametrize("seed", range(6))
def test_theta2_init_keeps_goal_preconditions(theta2_config, seed):
    """Testa que o Ii de cada meta Gi sempre vale no estado sorteado."""
    problem = theta2_config.generate_problem(3, seed)

    for goal in problem.goals:
        if goal != Literal("G-ALPHA"):
            assert Literal(f"I{goal.predicate[1:]}") in problem.init


def test_theta2_init_is_sampled(theta2_config):
    """Testa que os Ii sem meta correspondente variam entre sementes."""
    inits = {theta2_config.generate_problem(2, seed).init for seed in range(20)}
    assert len(inits) > 1

    again = theta2_config.generate_problem(2, 3)
    assert again.init == theta2_config.generate_problem(2, 3).init


def test_theta2_make_problem_without_rng(theta2_config):
    """Testa o estado inicial completo quando nenhum gerador é passado."""
    problem = theta2_config.make_problem((Literal("G2"),), "fixo")
    assert {Literal(f"I{i}") for i in range(1, 6)} <= problem.init


def test_theta2_lists_beta_operators_first():
    """Testa a ordem dos esquemas: Ai-BETA antes de Ai-ALPHA."""
    names = [s.name for s in build_theta2_domain(2).schemas]
    assert names == ["A1-BETA", "A1-ALPHA", "A2-BETA", "A2-ALPHA", "A-ALPHA"]


def test_theta2_rejects_too_many_goals(theta2_config):
    with pytest.raises(ValueError):
        theta2_config.generate_problem(7, 0)


def test_invalid_config():
    with pytest.raises(ValueError):
        Theta2Config(step_bound=0)


# ==========================================================
# Blocos
# ==========================================================


@pytest.mark.parametrize("seed", [0, 3])
def test_blocks_initial_state(seed):
    """Testa que cada bloco está sobre exatamente uma coisa."""
    problem = BlocksConfig(blocks=5).generate_problem(3, seed)

    below = Counter(f.args[0] for f in problem.init if f.predicate == "On")
    assert len(below) == 5 and set(below.values()) == {1}
    assert len(problem.goals) == 3
    assert problem.domain.constants == frozenset({"Table"})
