"""Exception hierarchy shared by all strichartzlab modules."""


class StrichartzLabError(Exception):
    """Base class for all errors raised by this package."""


class NonSpd(StrichartzLabError):
    """Matrix is not symmetric positive definite."""


class DimensionMismatch(StrichartzLabError):
    """A point was supplied with the wrong number of coordinates."""


class NonpositiveZ(StrichartzLabError):
    """Evaluation requested at z <= 0, outside the half-space the
    construction lives on."""


class OutOfCone(StrichartzLabError):
    """Taylor-remainder evaluation requested outside the cone |y| < z."""


class DegenerateMinimum(StrichartzLabError):
    """Extracted quadratic form has a (near-)zero eigenvalue, so the
    potential is not of generalized Morse type."""


class NonzeroMinimum(StrichartzLabError):
    """Profile does not have value zero and vanishing gradient at the
    origin."""


class UnknownProfile(StrichartzLabError):
    """Requested built-in potential profile does not exist."""


class NonconvergedQuadrature(StrichartzLabError):
    """Panel refinement stalled above the requested relative tolerance."""


class ForbiddenEndpoint(StrichartzLabError):
    """The pair (n, p) = (2, 2) is excluded from admissibility."""


class NonAdmissible(StrichartzLabError):
    """No admissible q >= 2 exists for the requested (n, p)."""


class EmptyWindow(StrichartzLabError):
    """The admissible gamma window is empty."""


class InsufficientPoints(StrichartzLabError):
    """Too few grid points for a meaningful slope fit."""


class BoundViolated(StrichartzLabError):
    """A measured norm exceeds its predicted upper bound; signals a
    transcription error in the forcing or the norm engine."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InvalidConfig(StrichartzLabError):
    """Run configuration failed validation."""
