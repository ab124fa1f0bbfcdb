import random
from functools import cached_property

from plan_replay.domain_configs.base import BaseDomainConfig
from plan_replay.models import Domain, Literal, ProblemSpec
from plan_replay.parsers.domain import load_bundled_domain


class LogisticsConfig(BaseDomainConfig):
    """Transporte logístico: cada cidade tem um aeroporto APk e um correio POk.

    Exclusividade do estado inicial: cada pacote, avião e caminhão ocupa
    exatamente uma localização; caminhões ficam na sua cidade e aviões em
    aeroportos. Na variante de rota restrita não há caminhões e os pacotes
    começam em aeroportos.
    """

    NAME = "logistics"
    DOMAIN_FILE = "logistics.sexp"
    ROUTE_RESTRICTED_FILE = "logistics-route-restricted.sexp"

    DEFAULT_CITIES = 6
    DEFAULT_PLANES = 6
    DEFAULT_TRUCKS = 6
    DEFAULT_PACKAGES = 8

    STEP_BOUND_BASE = 3
    STEP_BOUND_PER_GOAL = 4

    def __init__(
        self,
        cities: int | None = None,
        planes: int | None = None,
        trucks: int | None = None,
        packages: int | None = None,
        route_restricted: bool = False,
        same_destination: bool = False,
        step_bound: int | None = None,
    ):
        """
        Args:
            cities: Número de cidades (um aeroporto e um correio cada)
            planes: Número de aviões
            trucks: Número de caminhões (ignorado com rota restrita)
            packages: Número de pacotes
            route_restricted: Usa o domínio em que cada aeroporto recebe um só pouso
            same_destination: Todas as metas levam pacotes ao mesmo aeroporto
            step_bound: Limite fixo de passos
        """
        self.cities = cities or self.DEFAULT_CITIES
        self.planes = planes or self.DEFAULT_PLANES
        self.trucks = 0 if route_restricted else (trucks or self.DEFAULT_TRUCKS)
        self.packages = packages or self.DEFAULT_PACKAGES
        self.route_restricted = route_restricted
        self.same_destination = same_destination
        super().__init__(step_bound)

    def _validate_config(self) -> None:
        super()._validate_config()
        if self.cities <= 0:
            raise ValueError(f"Número de cidades deve ser positivo: {self.cities}")
        if self.planes <= 0:
            raise ValueError(f"Número de aviões deve ser positivo: {self.planes}")
        if self.packages <= 0:
            raise ValueError(f"Número de pacotes deve ser positivo: {self.packages}")
        if self.trucks < 0:
            raise ValueError(f"Número de caminhões inválido: {self.trucks}")
        if self.route_restricted and self.cities < 2:
            raise ValueError("Rota restrita exige ao menos duas cidades")

    @cached_property
    def domain(self) -> Domain:
        filename = (
            self.ROUTE_RESTRICTED_FILE if self.route_restricted else self.DOMAIN_FILE
        )
        return load_bundled_domain(filename)

    @property
    def airports(self) -> list[str]:
        return [f"AP{k}" for k in range(1, self.cities + 1)]

    @property
    def post_offices(self) -> list[str]:
        if self.route_restricted:
            return []
        return [f"PO{k}" for k in range(1, self.cities + 1)]

    @property
    def locations(self) -> list[str]:
        return self.airports + self.post_offices

    def filter_conditions(self) -> set[Literal]:
        """Layout fixo das cidades."""
        facts = {Literal("IS-A", ("AIRPORT", ap)) for ap in self.airports}
        for ap, po in zip(self.airports, self.post_offices):
            facts.add(Literal("SAME-CITY", (ap, po)))
            facts.add(Literal("SAME-CITY", (po, ap)))
        return facts

    def _generate(self, n_goals: int, rng: random.Random, seed: int) -> ProblemSpec:
        if n_goals > self.packages:
            raise ValueError(
                f"{n_goals} metas excedem os {self.packages} pacotes disponíveis"
            )
        init = self.filter_conditions()

        for t in range(1, self.trucks + 1):
            k = (t - 1) % self.cities + 1
            city = [f"AP{k}"] + ([f"PO{k}"] if self.post_offices else [])
            init.add(Literal("AT-TR", (f"TR{t}", rng.choice(city))))
        for p in range(1, self.planes + 1):
            init.add(Literal("AT-PL", (f"PL{p}", rng.choice(self.airports))))
        where: dict[str, str] = {}
        for o in range(1, self.packages + 1):
            where[f"OB{o}"] = rng.choice(self.locations)
            init.add(Literal("AT-OB", (f"OB{o}", where[f"OB{o}"])))

        goals = self._goals(n_goals, where, rng)
        return ProblemSpec(
            self.problem_name(n_goals, seed), self.domain, frozenset(init), goals
        )

    def _goals(
        self, n_goals: int, where: dict[str, str], rng: random.Random
    ) -> tuple[Literal, ...]:
        if self.same_destination:
            candidates = [
                ap
                for ap in self.airports
                if sum(1 for loc in where.values() if loc != ap) >= n_goals
            ]
            if not candidates:
                raise ValueError(
                    f"Nenhum destino comum admite {n_goals} pacotes fora dele"
                )
            destination = rng.choice(candidates)
            movable = sorted(ob for ob, loc in where.items() if loc != destination)
            chosen = rng.sample(movable, n_goals)
            return tuple(Literal("AT-OB", (ob, destination)) for ob in chosen)

        goals = []
        for ob in rng.sample(sorted(where), n_goals):
            options = [loc for loc in self.locations if loc != where[ob]]
            goals.append(Literal("AT-OB", (ob, rng.choice(options))))
        return tuple(goals)

    def describe(self) -> dict[str, str]:
        info = super().describe()
        info["Cidades"] = str(self.cities)
        info["Aviões / caminhões"] = f"{self.planes} / {self.trucks}"
        info["Pacotes"] = str(self.packages)
        if self.route_restricted:
            info["Variante"] = "rota restrita"
        if self.same_destination:
            info["Destino"] = "comum"
        return info
