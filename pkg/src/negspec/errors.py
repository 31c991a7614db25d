"""Exception types shared across the package."""


class NegspecError(Exception):
    """Base class for all package-specific failures."""


class DomainError(NegspecError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class LightConeSingularity(NegspecError):
    """Evaluation requested on (or numerically indistinguishable from) r = |tau|."""


class CoincidentPoints(NegspecError):
    """Two smearing points coincide with no regulator to separate them."""


class ExtrapolationDiverged(NegspecError):
    """Successive regulator extrapolants grow monotonically instead of settling."""


class NonConvergence(NegspecError):
    """An iterative quadrature ran out of panels before meeting its tolerance."""


class TailNotConverged(NegspecError):
    """An image sum hit its term budget before the tail bound was satisfied."""


class BracketFailure(NegspecError):
    """A root finder was handed an interval that does not bracket a sign change."""
