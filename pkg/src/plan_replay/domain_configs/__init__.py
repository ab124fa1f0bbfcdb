"""Configurações dos domínios de benchmark."""

from .base import BaseDomainConfig
from .blocks import BlocksConfig
from .logistics import LogisticsConfig
from .theta2 import Theta2Config, build_theta2_domain

# Registro de domínios disponíveis
AVAILABLE_DOMAINS: dict[str, type[BaseDomainConfig]] = {
    "logistics": LogisticsConfig,
    "theta2": Theta2Config,
    "blocks": BlocksConfig,
}


def load_domain_config(name: str) -> type[BaseDomainConfig]:
    """Classe de configuração registrada para o domínio."""
    if name not in AVAILABLE_DOMAINS:
        available = ", ".join(AVAILABLE_DOMAINS)
        raise ValueError(
            f"Domínio '{name}' não encontrado. Disponíveis: {available}"
        )
    return AVAILABLE_DOMAINS[name]


__all__ = [
    "BaseDomainConfig",
    "LogisticsConfig",
    "Theta2Config",
    "BlocksConfig",
    "build_theta2_domain",
    "AVAILABLE_DOMAINS",
    "load_domain_config",
]
