"""Modelos de dados do planejador."""

from .bindings import BindingSet, Codesignation, UnifyFailure, unify
from .case import Case, CaseAnnotation, CaseInstance, RetrievalResult
from .explanation import CaseFailureReason, FailureExplanation
from .literals import Literal, is_variable, positional_pattern
from .experiment import ExperimentSpec, TrainingProtocol
from .metrics import MetricsRow
from .operators import Domain, GroundAction, OperatorSchema, ProblemSpec
from .plan import (
    GOAL_STEP,
    START_STEP,
    BindingConflict,
    CausalLink,
    Decision,
    DecisionKind,
    InitContradiction,
    OpenCondition,
    OrderingCycle,
    PartialPlan,
    Refinement,
    Step,
    Threat,
)
from .replay import (
    Failed,
    Recovered,
    ReplayLog,
    ReplayMetrics,
    ReplayMode,
    Sequenced,
    SkipReason,
)
from .search import (
    BudgetExceeded,
    Exhausted,
    SearchLimits,
    SearchNode,
    SearchStats,
    SearchStrategy,
    Solution,
)
from .trace import DecisionRecord, DecisionType, DerivationTrace

__all__ = [
    "Literal",
    "is_variable",
    "positional_pattern",
    "OperatorSchema",
    "GroundAction",
    "Domain",
    "ProblemSpec",
    "BindingSet",
    "Codesignation",
    "UnifyFailure",
    "unify",
    "START_STEP",
    "GOAL_STEP",
    "Step",
    "CausalLink",
    "OpenCondition",
    "Threat",
    "DecisionKind",
    "Decision",
    "Refinement",
    "PartialPlan",
    "OrderingCycle",
    "BindingConflict",
    "InitContradiction",
    "DecisionType",
    "DecisionRecord",
    "DerivationTrace",
    "FailureExplanation",
    "CaseFailureReason",
    "Case",
    "CaseAnnotation",
    "CaseInstance",
    "RetrievalResult",
    "SearchLimits",
    "SearchStrategy",
    "SearchNode",
    "SearchStats",
    "Solution",
    "Exhausted",
    "BudgetExceeded",
    "ReplayMode",
    "ReplayLog",
    "ReplayMetrics",
    "SkipReason",
    "Sequenced",
    "Recovered",
    "Failed",
    "MetricsRow",
    "ExperimentSpec",
    "TrainingProtocol",
]
