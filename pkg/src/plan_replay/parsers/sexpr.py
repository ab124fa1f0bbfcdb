"""Leitor e escritor de s-expressions com posição de linha/coluna."""

from __future__ import annotations

from collections.abc import Iterator
from typing import Union

from plan_replay.errors import ParseError


class Symbol(str):
    """Átomo com a posição onde apareceu no texto."""

    line: int
    column: int

    def __new__(cls, value: str, line: int = 0, column: int = 0) -> Symbol:
        obj = super().__new__(cls, value)
        obj.line = line
        obj.column = column
        return obj


class SList(list):
    """Lista entre parênteses com a posição do '(' de abertura."""

    def __init__(self, items=(), line: int = 0, column: int = 0):
        super().__init__(items)
        self.line = line
        self.column = column


SExpr = Union[Symbol, SList]


# ============================================================================
# Leitura
# ============================================================================


def _tokens(text: str) -> Iterator[tuple[str, int, int]]:
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            yield ch, line, col
            i += 1
            col += 1
            continue
        start, start_col = i, col
        while i < n and not text[i].isspace() and text[i] not in "();":
            i += 1
            col += 1
        yield text[start:i], line, start_col


def parse_many(text: str) -> list[SExpr]:
    """Todas as expressões de topo do texto."""
    stack: list[SList] = [SList()]
    for token, line, col in _tokens(text):
        if token == "(":
            stack.append(SList(line=line, column=col))
        elif token == ")":
            if len(stack) == 1:
                raise ParseError("')' sem '(' correspondente", line, col)
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(Symbol(token, line, col))
    if len(stack) > 1:
        opened = stack[-1]
        raise ParseError("'(' não fechado", opened.line, opened.column)
    return list(stack[0])


def parse(text: str) -> SExpr:
    """Exatamente uma expressão de topo."""
    exprs = parse_many(text)
    if len(exprs) != 1:
        line = exprs[1].line if len(exprs) > 1 else 1
        column = exprs[1].column if len(exprs) > 1 else 1
        raise ParseError(
            f"Esperada uma expressão, encontradas {len(exprs)}", line, column
        )
    return exprs[0]


def expect_list(expr: SExpr, what: str) -> SList:
    if not isinstance(expr, SList):
        raise ParseError(
            f"Esperada lista para {what}, encontrado '{expr}'", expr.line, expr.column
        )
    return expr


def expect_symbol(expr: SExpr, what: str) -> Symbol:
    if not isinstance(expr, Symbol):
        raise ParseError(f"Esperado símbolo para {what}", expr.line, expr.column)
    return expr


def keyword_sections(items: list[SExpr], start: int = 0) -> dict[str, SExpr]:
    """Lê pares `:chave valor` a partir de `start`."""
    sections: dict[str, SExpr] = {}
    i = start
    while i < len(items):
        key = expect_symbol(items[i], "palavra-chave")
        if not key.startswith(":"):
            raise ParseError(
                f"Esperada palavra-chave, encontrado '{key}'", key.line, key.column
            )
        if i + 1 >= len(items):
            raise ParseError(f"Palavra-chave '{key}' sem valor", key.line, key.column)
        sections[key.lower()] = items[i + 1]
        i += 2
    return sections


# ============================================================================
# Escrita
# ============================================================================


def dumps(expr, indent: int = 0, width: int = 88) -> str:
    """Serializa listas aninhadas de str; quebra linhas só quando não cabe."""
    if isinstance(expr, str):
        return expr
    flat = "(" + " ".join(dumps(e, 0, 10**9) for e in expr) + ")"
    if len(flat) + indent <= width or not expr:
        return flat
    pad = " " * (indent + 1)
    parts = [dumps(expr[0], indent + 1, width)]
    i = 1
    while i < len(expr):
        item = expr[i]
        if isinstance(item, str) and item.startswith(":") and i + 1 < len(expr):
            value = dumps(expr[i + 1], indent + 2 + len(item), width)
            parts.append(f"{pad}{item} {value}")
            i += 2
            continue
        parts.append(pad + dumps(item, indent + 1, width))
        i += 1
    return "(" + "\n".join(parts) + ")"
