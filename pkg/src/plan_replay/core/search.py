"""Busca no espaço de refinamentos com limite de passos e viés de replay."""

from __future__ import annotations

import heapq
import time

from plan_replay.errors import SolutionExtractionError, SystematicityError
from plan_replay.models.explanation import CaseFailureReason
from plan_replay.models.operators import ProblemSpec
from plan_replay.models.plan import OpenCondition, PartialPlan, Refinement
from plan_replay.models.search import (
    BudgetExceeded,
    Exhausted,
    SearchLimits,
    SearchNode,
    SearchOutcome,
    SearchStats,
    SearchStrategy,
    Solution,
)
from plan_replay.utils.logging import get_logger

from .ebl import ExplanationCollector
from .lifting import Lifter
from .refinement import detect_flaws, extract_solution, make_null_plan, rank, refine
from .trace import extract_trace

logger = get_logger(__name__)


class _BudgetSignal(Exception):
    """Interrompe a exploração quando o orçamento de nós ou tempo acaba."""


class RefinementSearch:
    """
    Busca de refinamento sobre planos parciais.

    Sem plano esqueleto, explora a partir do plano nulo. Com esqueleto (cadeia de
    nós produzida pelo replay), explora primeiro a subárvore do esqueleto
    (extensão); se ela se esgota, constrói a razão de falha e então explora os
    irmãos do caminho replicado (recuperação).
    """

    def __init__(
        self,
        problem: ProblemSpec,
        strategy: SearchStrategy = SearchStrategy.BEST_FIRST,
        limits: SearchLimits | None = None,
        check_systematicity: bool = False,
        lifter: Lifter | None = None,
    ):
        self.problem = problem
        self.strategy = SearchStrategy(strategy)
        self.limits = limits or SearchLimits.for_goals(len(problem.goals))
        self.check_systematicity = check_systematicity
        self.lifter = lifter
        self.stats = SearchStats()
        self._serial = 0
        self._started = 0.0
        self._seen: set[tuple] = set()

    # ------------------------------------------------------------------
    # API pública
    # ------------------------------------------------------------------

    def _begin(self, skeletal: SearchNode | None) -> SearchNode:
        """Raiz da exploração; nós criados pelo replay ficam em `replay_nodes`."""
        self._started = time.perf_counter()
        self.stats = SearchStats(nodes_visited=1)
        if skeletal is None:
            return SearchNode(make_null_plan(self.problem), serial=self._next_serial())
        chain = skeletal.path()
        self.stats.replay_nodes = sum(1 for n in chain if n.replayed)
        self._serial = max(n.serial for n in chain)
        return skeletal

    def run(self, skeletal: SearchNode | None = None) -> SearchOutcome:
        root = self._begin(skeletal)
        collector = ExplanationCollector()
        try:
            found = self._explore([root], collector)
        except _BudgetSignal:
            logger.warning(f"Orçamento esgotado após {self.stats.nodes_visited} nós")
            return BudgetExceeded(self._finish(), collector.build(self.lifter))

        reason = collector.build(self.lifter)
        if found is not None:
            sequenced = skeletal is not None and self.stats.replay_nodes > 0
            return self._solution(found, sequenced=sequenced, reason=None)

        if skeletal is None or skeletal.parent is None:
            logger.info(f"❌ Espaço esgotado ({self.stats.nodes_visited} nós)")
            return Exhausted(reason, self._finish())

        logger.info("Extensão do esqueleto falhou; iniciando recuperação")
        try:
            found = self._explore(self._replay_siblings(skeletal), None)
        except _BudgetSignal:
            visited = self.stats.nodes_visited
            logger.warning(f"Orçamento esgotado na recuperação ({visited} nós)")
            return BudgetExceeded(self._finish(), reason)
        if found is not None:
            return self._solution(found, sequenced=False, reason=reason)
        visited = self.stats.nodes_visited
        logger.info(f"❌ Espaço esgotado após recuperação ({visited} nós)")
        return Exhausted(reason, self._finish())

    def explain_extension(self, skeletal: SearchNode) -> CaseFailureReason | None:
        """Só a extensão do esqueleto: razão de falha quando ela se esgota.

        None se a extensão encontra solução ou o orçamento acaba.
        """
        root = self._begin(skeletal)
        collector = ExplanationCollector()
        try:
            found = self._explore([root], collector)
        except _BudgetSignal:
            return None
        finally:
            self._finish()
        if found is not None:
            return None
        return collector.build(self.lifter)

    # ------------------------------------------------------------------
    # Exploração
    # ------------------------------------------------------------------

    def _next_serial(self) -> int:
        self._serial += 1
        return self._serial

    def _child(self, parent: SearchNode, refinement: Refinement) -> SearchNode:
        return parent.child(refinement.plan, refinement.decision, self._next_serial())

    def _check_budget(self) -> None:
        if self.stats.nodes_visited > self.limits.node_budget:
            raise _BudgetSignal()
        budget = self.limits.time_budget
        if budget is not None and time.perf_counter() - self._started > budget:
            raise _BudgetSignal()

    def _explore(
        self, roots: list[SearchNode], collector: ExplanationCollector | None
    ) -> SearchNode | None:
        if not roots:
            return None
        if self.strategy is SearchStrategy.IDDFS:
            start = max(1, min(r.plan.step_count for r in roots))
            for bound in range(start, self.limits.step_bound + 1):
                probe = ExplanationCollector() if collector is not None else None
                self._seen.clear()
                leaves_before = self.stats.depth_limit_leaves
                found = self._depth_first(roots, bound, probe)
                if collector is not None and probe is not None:
                    collector.explanations = probe.explanations
                    collector.depth_limited = probe.depth_limited
                if found is not None:
                    return found
                if self.stats.depth_limit_leaves == leaves_before:
                    return None
            return None
        self._seen.clear()
        if self.strategy is SearchStrategy.DFS:
            return self._depth_first(roots, self.limits.step_bound, collector)
        return self._best_first(roots, self.limits.step_bound, collector)

    def _best_first(
        self,
        roots: list[SearchNode],
        bound: int,
        collector: ExplanationCollector | None,
    ) -> SearchNode | None:
        frontier: list[tuple[int, int, SearchNode]] = []
        for node in roots:
            heapq.heappush(frontier, (rank(node.plan), node.serial, node))
        while frontier:
            _, _, node = heapq.heappop(frontier)
            if self._is_goal(node):
                return node
            for child in self._expand(node, bound, collector):
                heapq.heappush(frontier, (rank(child.plan), child.serial, child))
        return None

    def _depth_first(
        self,
        roots: list[SearchNode],
        bound: int,
        collector: ExplanationCollector | None,
    ) -> SearchNode | None:
        stack = list(reversed(roots))
        while stack:
            node = stack.pop()
            if self._is_goal(node):
                return node
            stack.extend(reversed(self._expand(node, bound, collector)))
        return None

    def _is_goal(self, node: SearchNode) -> bool:
        if detect_flaws(node.plan):
            return False
        try:
            extract_solution(node.plan)
        except SolutionExtractionError as e:
            logger.warning(f"Plano sem falhas descartado: {e}")
            return False
        return True

    def _expand(
        self, node: SearchNode, bound: int, collector: ExplanationCollector | None
    ) -> list[SearchNode]:
        self._check_systematic(node.plan)
        flaws = detect_flaws(node.plan)
        if not flaws:
            return []
        flaw = flaws[0]
        refinements = refine(node.plan, flaw)
        dead_end = not refinements and isinstance(flaw, OpenCondition)
        if dead_end and collector is not None:
            collector.record_dead_end(node, flaw)

        children: list[SearchNode] = []
        for refinement in refinements:
            self.stats.nodes_visited += 1
            self._check_budget()
            if not refinement.consistent:
                if collector is not None:
                    collector.record_inconsistent(
                        node, refinement.decision, refinement.plan, refinement.violation
                    )
                continue
            if refinement.plan.step_count > bound:
                self.stats.depth_limit_leaves += 1
                if collector is not None:
                    collector.record_depth_limit()
                continue
            children.append(self._child(node, refinement))
        logger.debug(f"Expandido {node!r}: {len(children)}/{len(refinements)} filhos")
        return children

    def _check_systematic(self, plan: PartialPlan) -> None:
        if not self.check_systematicity:
            return
        key = plan.canonical_key()
        if key in self._seen:
            raise SystematicityError(f"Nó repetido na busca: {plan!r}")
        self._seen.add(key)

    def _replay_siblings(self, skeletal: SearchNode) -> list[SearchNode]:
        """Filhos consistentes alternativos em cada ponto do caminho replicado.

        Pontos mais rasos primeiro: em empate de rank, o irmão mais próximo da
        raiz é explorado antes.
        """
        siblings: list[SearchNode] = []
        for node in skeletal.path()[1:]:
            parent = node.parent
            if not node.replayed or parent is None or node.decision is None:
                continue
            for refinement in refine(parent.plan, node.decision.flaw):
                if refinement.decision == node.decision:
                    continue
                self.stats.nodes_visited += 1
                self._check_budget()
                if not refinement.consistent:
                    continue
                if refinement.plan.step_count > self.limits.step_bound:
                    self.stats.depth_limit_leaves += 1
                    continue
                siblings.append(self._child(parent, refinement))
        return siblings

    # ------------------------------------------------------------------
    # Resultado
    # ------------------------------------------------------------------

    def _finish(self) -> SearchStats:
        self.stats.wall_time = time.perf_counter() - self._started
        return self.stats

    def _solution(self, node: SearchNode, sequenced: bool, reason) -> Solution:
        path = node.path()
        self.stats.path_length = len(path) - 1
        self.stats.replay_on_path = sum(1 for n in path if n.replayed)
        actions = extract_solution(node.plan)
        trace = extract_trace(node)
        stats = self._finish()
        logger.info(
            f"✓ Solução com {len(actions)} passos "
            f"({stats.nodes_visited} nós, {stats.wall_time:.2f}s)"
        )
        return Solution(node, actions, trace, stats, sequenced, reason)


def search(
    problem: ProblemSpec,
    strategy: SearchStrategy = SearchStrategy.BEST_FIRST,
    limits: SearchLimits | None = None,
    skeletal: SearchNode | None = None,
    check_systematicity: bool = False,
    lifter: Lifter | None = None,
) -> SearchOutcome:
    """Atalho funcional para `RefinementSearch(...).run(skeletal)`."""
    runner = RefinementSearch(problem, strategy, limits, check_systematicity, lifter)
    return runner.run(skeletal)

