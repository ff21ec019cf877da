"""Exception hierarchy.

``Alarm`` subclasses mark states that should be impossible when the
underlying mathematics is right (a closed form that fails to divide, an
inconsistent linear system). The CLI maps them to exit code 3.
"""


class QopError(Exception):
    pass


class InvalidParameters(QopError, ValueError):
    pass


class ZeroDivisorError(QopError, ZeroDivisionError):
    """Inverse requested for the zero element of a field."""


class Alarm(QopError):
    pass


class NonZeroRemainder(Alarm):
    def __init__(self, remainder, message="division left a nonzero remainder"):
        super().__init__(message)
        self.remainder = remainder


class InconsistentSystem(Alarm):
    pass


class UnderDetermined(Alarm):
    def __init__(self, rank, unknowns):
        super().__init__(f"rank {rank} < {unknowns} unknowns")
        self.rank = rank
        self.unknowns = unknowns


class ZeroDenominator(Alarm):
    pass


class InvariantViolation(Alarm):
    pass


class NotCoprime(Alarm):
    pass


class FSolveSingular(Alarm):
    pass


class IdentityViolation(QopError):
    def __init__(self, name, residual):
        super().__init__(f"identity {name!r} has a nonzero residual")
        self.name = name
        self.residual = residual


class NonConvergence(QopError):
    def __init__(self, worst_residual, iterations):
        super().__init__(
            f"root finder stopped after {iterations} iterations, "
            f"worst backward error {worst_residual:.3e}"
        )
        self.worst_residual = worst_residual
        self.iterations = iterations


class PoleProximity(QopError):
    def __init__(self, index, detail=""):
        super().__init__(f"root {index} lies near a pole of the Bethe equations {detail}".rstrip())
        self.index = index


class DuplicateNodes(QopError, ValueError):
    pass
