"""Arquivos s-expression empacotados: domínios, problemas, traços e experimentos."""
