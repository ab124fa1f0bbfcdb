"""Motor de planejamento: refinamento, busca, traços, replay e EBL."""

from .ebl import build_case_failure_reason, explain_leaf, reason_holds, regress
from .executor import execute
from .lifting import Lifter
from .refinement import detect_flaws, extract_solution, make_null_plan, refine
from .replay import (
    adapt,
    confirm_reason,
    instance_lifter,
    replay,
    validate_decision,
)
from .search import RefinementSearch, search
from .trace import extract_trace, footprint, lift

__all__ = [
    "execute",
    "make_null_plan",
    "detect_flaws",
    "refine",
    "extract_solution",
    "RefinementSearch",
    "search",
    "extract_trace",
    "lift",
    "footprint",
    "Lifter",
    "explain_leaf",
    "regress",
    "build_case_failure_reason",
    "reason_holds",
    "validate_decision",
    "replay",
    "adapt",
    "confirm_reason",
    "instance_lifter",
]
