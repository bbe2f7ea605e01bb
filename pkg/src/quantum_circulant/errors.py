"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures to distinct process statuses without a lookup table of its own.
"""


class CirculantError(Exception):
    exit_code = 1


# graph construction -------------------------------------------------------

class GraphError(CirculantError, ValueError):
    exit_code = 10


class NotStrictlyIncreasing(GraphError):
    pass


class JumpOutOfRange(GraphError):
    pass


class Disconnected(GraphError):
    pass


class InvalidProbability(GraphError):
    pass


class EmptyJumpSet(GraphError):
    pass


class InvalidMetric(GraphError):
    pass


# secular functions ---------------------------------------------------------

class SecularError(CirculantError, ValueError):
    exit_code = 20


class TooCloseToPole(SecularError):
    """Raised when k is inside the guard band around the Dirichlet set."""


class PoleHit(SecularError):
    """Raised when k sits on (or numerically at) a pole of some p_j."""


# spectrum assembly ---------------------------------------------------------

class SolverError(CirculantError, RuntimeError):
    exit_code = 30


class MonotonicityViolation(SolverError):
    pass


class DimensionTooSmall(SolverError, ValueError):
    pass


class WeylCountMismatch(SolverError):
    exit_code = 31


class EmptySpectrum(SolverError, ValueError):
    pass


# statistics ----------------------------------------------------------------

class StatsError(CirculantError, ValueError):
    exit_code = 40


class TooFewLevels(StatsError):
    pass


class XmaxTooLarge(StatsError):
    pass


class DomainError(StatsError):
    pass


class NoBracket(StatsError):
    pass


# zeta functions ------------------------------------------------------------

class ZetaError(CirculantError, ArithmeticError):
    exit_code = 50


class PoleAtOne(ZetaError):
    pass


class ArgumentOutOfRange(ZetaError, ValueError):
    pass


class QuadratureFailure(ZetaError):
    pass


class NearSingularMhat(ZetaError):
    pass


class DegenerateC(ZetaError):
    pass


# command line --------------------------------------------------------------

class ConfigError(CirculantError, ValueError):
    exit_code = 2


class UsageError(ConfigError):
    exit_code = 2


class FileNotFound(ConfigError):
    exit_code = 3


class SchemaError(ConfigError):
    exit_code = 4


class VerificationFailed(CirculantError):
    """Two independent evaluations of the same quantity disagree."""
    exit_code = 5


# warnings ------------------------------------------------------------------

class NonPrimeWarning(UserWarning):
    pass


class SymmetricMetricWarning(UserWarning):
    pass
