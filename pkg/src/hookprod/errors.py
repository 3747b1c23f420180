"""Exception hierarchy shared by every hookprod module."""


class HookprodError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""

    exit_code = 2


class ComplexSyntaxError(HookprodError, ValueError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class ClosureError(HookprodError, ValueError):
    pass


class MonotonicityError(HookprodError, ValueError):
    pass


class MissingG(HookprodError, ValueError):
    pass


class UncoveredPoint(HookprodError, ValueError):
    pass


class InvalidMatching(HookprodError, ValueError):
    pass


class NotHookDecomposable(HookprodError):
    pass


class UnstableTail(HookprodError, ValueError):
    pass


class UnsupportedHook(HookprodError, ValueError):
    pass


class BudgetExceeded(HookprodError):
    """Raised when an exhaustive search would exceed its configured size.

    ``partial`` optionally carries whatever was computed before giving up.
    """

    exit_code = 3

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
