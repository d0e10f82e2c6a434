"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class SolitonError(Exception):
    """Base class for all errors raised by ruledsolitons."""


class LightlikeNormalization(SolitonError):
    pass


class DegeneratePoint(SolitonError):
    """The induced metric is degenerate (EG - F^2 ~ 0) at the requested point."""


class AllPointsDegenerate(SolitonError):
    pass


class EpsUnavailable(SolitonError):
    pass


class RankDeficient(SolitonError):
    """The velocity system does not determine every component of v.

    The minimum-norm fit is still attached so callers can inspect it.
    """

    def __init__(self, message: str, fit=None):
        super().__init__(message)
        self.fit = fit

    @property
    def nullspace_dim(self) -> int:
        return 0 if self.fit is None else self.fit.nullspace_dim


class DomainViolation(SolitonError):
    pass


class EpsMismatch(SolitonError):
    pass


class DegenerateBase(SolitonError):
    pass


class RegimeViolationAtStart(SolitonError):
    pass


class StepUnderflow(SolitonError):
    pass


class OutOfRange(SolitonError):
    pass


class IncompatiblePair(SolitonError):
    pass


class LightlikeDirectorDerivative(SolitonError):
    pass


class DegenerateSampleSet(SolitonError):
    pass


class InconclusiveSampling(SolitonError):
    pass


class ParseError(SolitonError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        elif column is not None:
            where = f" (column {column})"
        super().__init__(message + where)
        self.message = message
        self.line = line
        self.column = column


class EvalDomainError(SolitonError):
    """An elementary function was evaluated outside its real domain."""

    def __init__(self, message: str, s: float | None = None):
        if s is not None:
            message = f"{message} at s={s:.17g}"
        super().__init__(message)
        self.s = s
