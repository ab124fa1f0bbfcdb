import random
from functools import cached_property

from plan_replay.models import Domain, ProblemSpec
from plan_replay.parsers.domain import load_bundled_domain


class BaseDomainConfig:
    """Configurações e constantes de um domínio de benchmark."""

    # Domínio
    NAME: str  # logistics
    DOMAIN_FILE: str  # "logistics.sexp"

    # Limite de passos: STEP_BOUND_BASE + STEP_BOUND_PER_GOAL * metas
    STEP_BOUND_BASE = 1
    STEP_BOUND_PER_GOAL = 1

    def __init__(self, step_bound: int | None = None):
        """
        Args:
            step_bound: Limite fixo de passos; None usa a regra por número de metas
        """
        self.fixed_step_bound = step_bound
        self._validate_config()

    @cached_property
    def domain(self) -> Domain:
        return load_bundled_domain(self.DOMAIN_FILE)

    def step_bound(self, n_goals: int) -> int:
        if self.fixed_step_bound:
            return self.fixed_step_bound
        return self.STEP_BOUND_BASE + self.STEP_BOUND_PER_GOAL * n_goals

    def problem_name(self, n_goals: int, seed: int) -> str:
        return f"{self.NAME}-{n_goals}g-s{seed}"

    def generate_problem(self, n_goals: int, seed: int) -> ProblemSpec:
        """Problema aleatório com `n_goals` metas; determinístico por semente."""
        if n_goals < 1:
            raise ValueError(f"Número de metas deve ser positivo: {n_goals}")
        return self._generate(n_goals, random.Random(seed), seed)

    def _generate(self, n_goals: int, rng: random.Random, seed: int) -> ProblemSpec:
        raise NotImplementedError

    def _validate_config(self) -> None:
        """Valida as configurações."""
        if self.fixed_step_bound is not None and self.fixed_step_bound < 1:
            raise ValueError(
                f"Limite de passos deve ser positivo: {self.fixed_step_bound}"
            )

    def describe(self) -> dict[str, str]:
        """Parâmetros para o resumo exibido pela CLI."""
        return {"Domínio": self.NAME}
