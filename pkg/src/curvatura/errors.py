"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class CurvaturaError(Exception):
    exit_code = 1


class PropertyFailure(CurvaturaError):
    exit_code = 1


class ExprSyntaxError(CurvaturaError, ValueError):
    exit_code = 2

    def __init__(self, message: str, offset: int, source: str = ""):
        self.message = message
        self.offset = offset
        self.source = source
        super().__init__(f"{message} at byte {offset}")


class UnknownIdentifierError(ExprSyntaxError):
    pass


class SurfaceFileError(CurvaturaError, ValueError):
    exit_code = 2


class ImmersionError(CurvaturaError, ValueError):
    """The parametrization is not an immersion at the requested point."""

    exit_code = 3


class DomainError(CurvaturaError, ValueError):
    """A function was evaluated outside its domain (sqrt/ln/division)."""

    exit_code = 3

    def __init__(self, message: str, subexpr: str = ""):
        self.subexpr = subexpr
        super().__init__(f"{message}: {subexpr}" if subexpr else message)


class UndefinedQuantityError(CurvaturaError, ValueError):
    """Requested quantity does not exist at this point (e.g. pairing when Delta = 0)."""

    exit_code = 4


class GridFailureBudget(CurvaturaError):
    exit_code = 5


class ConfigError(CurvaturaError, ValueError):
    """Invalid command-line or [analysis] settings."""

    exit_code = 2
