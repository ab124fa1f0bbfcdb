"""Pytest configuration and fixtures for planner tests."""

from pathlib import Path

import pytest

from plan_replay.domain_configs import Theta2Config
from plan_replay.models import Domain, Literal, ProblemSpec, SearchLimits
from plan_replay.parsers.domain import bundled_text, load_bundled_domain, parse_problem
from plan_replay.storage import CaseLibrary, LocalBackend


@pytest.fixture
def logistics() -> Domain:
    return load_bundled_domain("logistics.sexp")


@pytest.fixture
def route_restricted() -> Domain:
    return load_bundled_domain("logistics-route-restricted.sexp")


@pytest.fixture
def theta2() -> Domain:
    return load_bundled_domain("theta2.sexp")


@pytest.fixture
def blocks() -> Domain:
    return load_bundled_domain("blocks.sexp")


@pytest.fixture
def one_package(logistics) -> ProblemSpec:
    """Um pacote, um avião: OB1 de l_i para l_d com o avião em l_p."""
    return parse_problem(bundled_text("one-package.sexp"), logistics)


@pytest.fixture
def two_packages(route_restricted) -> ProblemSpec:
    """Dois pacotes para l_d no domínio de rota restrita."""
    return parse_problem(bundled_text("two-packages.sexp"), route_restricted)


@pytest.fixture
def renamed_one_package(logistics) -> ProblemSpec:
    """O problema de um pacote com outros nomes de objetos."""
    init = frozenset(
        {
            Literal("IS-A", ("AIRPORT", "AP1")),
            Literal("IS-A", ("AIRPORT", "AP2")),
            Literal("IS-A", ("AIRPORT", "AP3")),
            Literal("AT-PL", ("PL9", "AP3")),
            Literal("AT-OB", ("OB7", "AP1")),
        }
    )
    return ProblemSpec("RENAMED", logistics, init, (Literal("AT-OB", ("OB7", "AP2")),))


@pytest.fixture
def theta2_config() -> Theta2Config:
    return Theta2Config(m=5)


@pytest.fixture
def small_limits() -> SearchLimits:
    """Limites pequenos para problemas de uma ou duas metas."""
    return SearchLimits(step_bound=8, node_budget=20_000)


@pytest.fixture
def backend(tmp_path: Path) -> LocalBackend:
    """Backend local novo em diretório temporário."""
    return LocalBackend(base_path=tmp_path / "library")


@pytest.fixture
def library(backend) -> CaseLibrary:
    return CaseLibrary(backend)
