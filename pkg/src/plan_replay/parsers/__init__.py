"""Parsers do dialeto s-expression: domínios, problemas, traços e experimentos."""

from .domain import (
    load_bundled_domain,
    load_domain,
    load_problem,
    load_problem_source,
    parse_domain,
    parse_domain_and_problem,
    parse_problem,
)
from .trace import (
    deserialize_case,
    deserialize_reason,
    deserialize_trace,
    serialize_case,
    serialize_reason,
    serialize_trace,
)

__all__ = [
    "parse_domain_and_problem",
    "parse_domain",
    "parse_problem",
    "load_domain",
    "load_problem",
    "load_bundled_domain",
    "load_problem_source",
    "serialize_trace",
    "deserialize_trace",
    "serialize_case",
    "deserialize_case",
    "serialize_reason",
    "deserialize_reason",
]
