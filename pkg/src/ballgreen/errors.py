"""Exceptions raised by ballgreen."""


class BallGreenError(Exception):
    """Base class for every error raised by the library."""


class DomainError(BallGreenError, ValueError):
    """An argument lies outside the domain of the operation."""


class AdmissibilityError(DomainError):
    """Exponents (or the Riesz gap) are outside the admissible range."""


class SingularityError(DomainError):
    """Evaluation requested exactly on a kernel singularity."""


class ConvergenceError(BallGreenError, RuntimeError):
    """A series or iteration hit its hard cap without converging."""


class ZeroSearchError(ConvergenceError):
    """No sign change was found while bracketing a zero."""
