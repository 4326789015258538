"""
shadowlab: desk-scale experiments on mean ergodic shadowing and its relatives.

The mathematical library lives in :mod:`shadowlab.core`; experiments, services
and the command line build on it.
"""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    ConfigError,
    ConstructionError,
    DomainError,
    OutputError,
    ParameterError,
    RangeError,
    ResourceError,
    ShadowLabError,
    UsageError,
)

__all__ = [
    '__version__',
    'ConfigError',
    'ConstructionError',
    'DomainError',
    'OutputError',
    'ParameterError',
    'RangeError',
    'ResourceError',
    'ShadowLabError',
    'UsageError',
]
