import random

from plan_replay.domain_configs.base import BaseDomainConfig
from plan_replay.models import Literal, ProblemSpec

TABLE = "Table"


class BlocksConfig(BaseDomainConfig):
    """Mundo de blocos; estados iniciais e metas vêm de torres aleatórias."""

    NAME = "blocks"
    DOMAIN_FILE = "blocks.sexp"

    DEFAULT_BLOCKS = 6

    def __init__(self, blocks: int | None = None, step_bound: int | None = None):
        """
        Args:
            blocks: Número de blocos
            step_bound: Limite fixo de passos
        """
        self.blocks = blocks or self.DEFAULT_BLOCKS
        super().__init__(step_bound)

    def _validate_config(self) -> None:
        super()._validate_config()
        if self.blocks < 2:
            raise ValueError(f"São necessários ao menos 2 blocos: {self.blocks}")

    def step_bound(self, n_goals: int) -> int:
        return self.fixed_step_bound or 2 * self.blocks

    def towers(self, rng: random.Random) -> list[list[str]]:
        """Cada bloco sobre a mesa ou sobre um único bloco."""
        names = [f"B{i}" for i in range(1, self.blocks + 1)]
        rng.shuffle(names)
        towers: list[list[str]] = []
        for block in names:
            if towers and rng.random() < 0.5:
                towers[-1].append(block)
            else:
                towers.append([block])
        return towers

    @staticmethod
    def on_literals(towers: list[list[str]]) -> list[Literal]:
        facts = []
        for tower in towers:
            below = TABLE
            for block in tower:
                facts.append(Literal("On", (block, below)))
                below = block
        return facts

    def _generate(self, n_goals: int, rng: random.Random, seed: int) -> ProblemSpec:
        if n_goals > self.blocks:
            raise ValueError(f"{n_goals} metas excedem os {self.blocks} blocos")
        start = self.towers(rng)
        init = set(self.on_literals(start))
        init |= {Literal("Clear", (tower[-1],)) for tower in start}

        target = self.on_literals(self.towers(rng))
        fresh = [lit for lit in target if lit not in init]
        stale = [lit for lit in target if lit in init]
        rng.shuffle(fresh)
        rng.shuffle(stale)
        goals = (fresh + stale)[:n_goals]
        return ProblemSpec(
            self.problem_name(n_goals, seed), self.domain, frozenset(init), tuple(goals)
        )

    def describe(self) -> dict[str, str]:
        info = super().describe()
        info["Blocos"] = str(self.blocks)
        return info
