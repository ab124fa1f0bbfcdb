"""Hierarquia de exceções do planejador."""


class PlanReplayError(Exception):
    """Erro base da aplicação."""


class ParseError(PlanReplayError):
    """Erro de sintaxe em arquivo s-expression."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} (linha {line}, coluna {column})")


class DomainValidationError(PlanReplayError):
    """Domínio ou problema inconsistente (aridade, variável livre, esquema)."""


class SolutionExtractionError(PlanReplayError):
    """Plano sem falhas que não pôde ser linearizado e aterrado."""


class LibraryError(PlanReplayError):
    """Erro na biblioteca de casos."""


class PrefixViolationError(LibraryError):
    """Sequência de decisões é prefixo de um caso já armazenado (ou vice-versa)."""


class SystematicityError(PlanReplayError):
    """Dois nós expandidos com o mesmo conjunto canônico de restrições."""


class ExperimentSpecError(PlanReplayError):
    """Arquivo de experimento inválido."""
