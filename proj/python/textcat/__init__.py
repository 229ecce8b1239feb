"""Corpus-adaptive text categorization."""

from ._textcat import (
    ConfigError,
    Corpus,
    InputError,
    LoadError,
    Model,
    NumericalError,
    corrupt,
    corrupt_corpus,
    generate_fixture,
    sweep,
    tokenize,
)

__all__ = [
    "ConfigError",
    "Corpus",
    "InputError",
    "LoadError",
    "Model",
    "NumericalError",
    "corrupt",
    "corrupt_corpus",
    "generate_fixture",
    "sweep",
    "tokenize",
]
