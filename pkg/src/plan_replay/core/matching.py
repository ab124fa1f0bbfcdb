"""Casamento de padrões entre literais generalizados e literais do problema."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence

from plan_replay.models.literals import Literal, is_variable

Substitution = dict[str, str]


def match_literal(
    pattern: Literal,
    target: Literal,
    theta: Mapping[str, str],
    is_free: Callable[[str], bool] = is_variable,
) -> Substitution | None:
    """Estende `theta` para que `pattern` vire `target`; None se impossível."""
    if not pattern.same_shape(target):
        return None
    result = dict(theta)
    for p, t in zip(pattern.args, target.args):
        if is_free(p):
            bound = result.get(p)
            if bound is None:
                result[p] = t
            elif bound != t:
                return None
        elif p != t:
            return None
    return result


def _index(facts: Iterable[Literal]) -> dict[str, list[Literal]]:
    index: dict[str, list[Literal]] = {}
    for fact in sorted(facts):
        index.setdefault(fact.predicate, []).append(fact)
    return index


def match_all(
    patterns: Sequence[Literal], facts: Iterable[Literal], theta: Mapping[str, str]
) -> Iterator[Substitution]:
    """Todas as extensões de `theta` que tornam cada padrão um fato de `facts`."""
    index = _index(facts)

    def backtrack(i: int, current: Substitution) -> Iterator[Substitution]:
        if i == len(patterns):
            yield current
            return
        for fact in index.get(patterns[i].predicate, ()):
            extended = match_literal(patterns[i], fact, current)
            if extended is not None:
                yield from backtrack(i + 1, extended)

    yield from backtrack(0, dict(theta))


def match_injective(
    patterns: Sequence[Literal], targets: Sequence[Literal], theta: Mapping[str, str]
) -> Iterator[tuple[Substitution, tuple[Literal, ...]]]:
    """Mapeia cada padrão para um alvo distinto; devolve a substituição e a imagem."""

    def backtrack(
        i: int, current: Substitution, used: tuple[Literal, ...]
    ) -> Iterator[tuple[Substitution, tuple[Literal, ...]]]:
        if i == len(patterns):
            yield current, used
            return
        for target in targets:
            if target in used:
                continue
            extended = match_literal(patterns[i], target, current)
            if extended is not None:
                yield from backtrack(i + 1, extended, used + (target,))

    yield from backtrack(0, dict(theta), ())
