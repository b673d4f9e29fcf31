"""Exception types raised by modeseek."""


class ModeSeekError(Exception):
    """Base class for all modeseek errors."""


class DomainError(ModeSeekError, ValueError):
    """An argument lies outside the domain of the function."""


class DegenerateWeightsError(ModeSeekError, ArithmeticError):
    """Every kernel weight vanished, so the weighted mean is undefined.

    Only compact-support profiles can trigger this (e.g. Epanechnikov when no
    sample lies within one bandwidth of the query point).
    """

    def __init__(self, x, message=None):
        self.x = x
        super().__init__(message or f"all kernel weights are zero at x={x!r}")


class InapplicableCheckError(ModeSeekError):
    """A diagnostic was requested on a trajectory that does not satisfy its precondition."""


class SampleParseError(ModeSeekError, ValueError):
    def __init__(self, path, lineno, line):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: cannot parse {line.strip()!r} as a number")


class TheoremPreconditionWarning(UserWarning):
    """The kernel profile does not meet the convergence theorem's assumptions."""
