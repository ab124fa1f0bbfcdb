import random
from collections.abc import Sequence
from functools import cached_property

from plan_replay.domain_configs.base import BaseDomainConfig
from plan_replay.models import Domain, Literal, OperatorSchema, ProblemSpec

ALPHA_GOAL = Literal("G-ALPHA")
P_ALPHA = Literal("P-ALPHA")
P_BETA = Literal("P-BETA")


def _goal(i: int) -> Literal:
    return Literal(f"G{i}")


def _init(i: int) -> Literal:
    return Literal(f"I{i}")


def build_theta2_domain(m: int) -> Domain:
    """Ai-BETA / Ai-ALPHA para i = 1..m e A-ALPHA, que apaga P-BETA e todos os Gi."""
    schemas = []
    for i in range(1, m + 1):
        earlier = tuple(_init(j) for j in range(1, i))
        for suffix, pre in (("BETA", P_BETA), ("ALPHA", P_ALPHA)):
            schemas.append(
                OperatorSchema(
                    name=f"A{i}-{suffix}",
                    params=(),
                    precond=(_init(i), pre),
                    add=(_goal(i),),
                    delete=earlier,
                )
            )
    schemas.append(
        OperatorSchema(
            name="A-ALPHA",
            params=(),
            add=(ALPHA_GOAL,),
            delete=(P_BETA, *(_goal(i) for i in range(1, m + 1))),
        )
    )
    return Domain(f"THETA2-{m}", tuple(schemas))


class Theta2Config(BaseDomainConfig):
    """Domínio artificial em que G-ALPHA obriga o uso dos operadores Ai-ALPHA."""

    NAME = "theta2"
    DOMAIN_FILE = "theta2.sexp"

    DEFAULT_M = 5

    STEP_BOUND_BASE = 1
    STEP_BOUND_PER_GOAL = 1

    OTHER_INIT_PROBABILITY = 0.5

    def __init__(
        self,
        m: int | None = None,
        include_alpha: bool = True,
        alpha_precondition: bool = True,
        step_bound: int | None = None,
    ):
        """
        Args:
            m: Número de metas Gi do domínio
            include_alpha: Toda meta sorteada inclui G-ALPHA
            alpha_precondition: P-ALPHA faz parte do estado inicial
            step_bound: Limite fixo de passos
        """
        self.m = m or self.DEFAULT_M
        self.include_alpha = include_alpha
        self.alpha_precondition = alpha_precondition
        super().__init__(step_bound)

    def _validate_config(self) -> None:
        super()._validate_config()
        if self.m < 1:
            raise ValueError(f"m deve ser >= 1: {self.m}")

    @cached_property
    def domain(self) -> Domain:
        return build_theta2_domain(self.m)

    def training_variant(self) -> "Theta2Config":
        """Problemas sem G-ALPHA e sem P-ALPHA: as derivações usam Ai-BETA."""
        return Theta2Config(self.m, False, False, self.fixed_step_bound)

    def make_problem(
        self,
        goals: Sequence[Literal],
        name: str,
        rng: random.Random | None = None,
    ) -> ProblemSpec:
        """Ii de cada meta Gi sempre vale; sem `rng`, todos os Ii valem.

        Com `rng`, cada Ii sem meta correspondente entra com probabilidade
        OTHER_INIT_PROBABILITY.
        """
        init = {P_BETA}
        for i in range(1, self.m + 1):
            needed = _goal(i) in goals
            if needed or rng is None or rng.random() < self.OTHER_INIT_PROBABILITY:
                init.add(_init(i))
        if self.alpha_precondition:
            init.add(P_ALPHA)
        return ProblemSpec(name, self.domain, frozenset(init), tuple(goals))

    def _generate(self, n_goals: int, rng: random.Random, seed: int) -> ProblemSpec:
        regular = n_goals - 1 if self.include_alpha else n_goals
        if regular > self.m:
            raise ValueError(
                f"{n_goals} metas excedem as {self.m} metas Gi do domínio"
            )
        goals = [_goal(i) for i in sorted(rng.sample(range(1, self.m + 1), regular))]
        if self.include_alpha:
            goals.append(ALPHA_GOAL)
        rng.shuffle(goals)
        return self.make_problem(goals, self.problem_name(n_goals, seed), rng)

    def describe(self) -> dict[str, str]:
        info = super().describe()
        info["m"] = str(self.m)
        info["G-ALPHA"] = "sempre" if self.include_alpha else "nunca"
        return info
