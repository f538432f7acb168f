""" Error and warning classes raised throughout zetalab. """


class ZetaLabError(Exception):
    """Base class for every error raised by a zetalab computation."""


class ZetaLabWarning(UserWarning):
    """Recoverable caveat (truncated sums, formal operators, stale caches)."""


# Domain errors: the input lies outside the region where the quantity is defined.


class PoleAtOne(ZetaLabError, ValueError):
    pass


class PoleAtZeroOrOne(ZetaLabError, ValueError):
    pass


class PoleAtNonpositiveInteger(ZetaLabError, ValueError):
    pass


class BranchAtOne(ZetaLabError, ValueError):
    pass


class PoleHit(ZetaLabError, ValueError):
    pass


class PoleOnSegment(ZetaLabError, ValueError):
    pass


class PoleInRange(ZetaLabError, ValueError):
    pass


class PoleAtOneInWindow(ZetaLabError, ValueError):
    pass


class AbscissaViolation(ZetaLabError, ValueError):
    pass


class GridTooShort(ZetaLabError, ValueError):
    pass


class GridMismatch(ZetaLabError, ValueError):
    pass


class SupportTouchesBoundary(ZetaLabError, ValueError):
    pass


class SupportUnbounded(ZetaLabError, ValueError):
    pass


class ShiftOutOfRange(ZetaLabError, ValueError):
    pass


class NonMonotoneTarget(ZetaLabError, ValueError):
    pass


class RangeExceeded(ZetaLabError, ValueError):
    pass


class Unsupported(ZetaLabError, ValueError):
    """The requested continuation or formula is not available for this string representation."""


class ConfigError(ZetaLabError, ValueError):
    """Command-line parameters failed validation before any computation started."""


# Computational errors: the input is valid but the requested accuracy could not be met.


class AccuracyExceeded(ZetaLabError, RuntimeError):
    pass


class DepthCapExceeded(ZetaLabError, RuntimeError):
    pass


class ScanStepTooCoarse(ZetaLabError, RuntimeError):
    pass


class ZeroTableTooSmall(ZetaLabError, RuntimeError):
    pass
