"""
Error types raised by shadowlab.

Every error carries a human readable ``detail`` and the process exit code the
command line maps it to.
"""


class ShadowLabError(Exception):
    """Base error. ``exit_code`` is what the CLI returns when it escapes a command."""

    exit_code: int = 2

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


class ParameterError(ShadowLabError):
    """An operation received parameters outside its contract."""


class RangeError(ParameterError):
    """An index or horizon argument is out of range."""


class DomainError(ShadowLabError):
    """Input data violates a mathematical precondition (e.g. an error above the diameter)."""


class ConstructionError(ShadowLabError):
    """A system could not be assembled from the supplied pieces."""


class UsageError(ShadowLabError):
    """Unknown experiment, system or malformed command line."""


class ConfigError(UsageError):
    """Configuration file or experiment configuration is invalid."""


class ResourceError(ShadowLabError):
    """A requested computation exceeds a declared budget."""

    exit_code = 3


class OutputError(ShadowLabError):
    """Reading or writing an artifact failed."""

    exit_code = 3
