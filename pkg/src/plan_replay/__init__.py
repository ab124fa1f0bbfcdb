"""Planejador POCL com replay derivacional e aprendizado por explicação de falhas."""

__version__ = "0.1.0"
