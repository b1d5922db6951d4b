"""Exception hierarchy shared by the solvers."""


class FhnError(Exception):
    """Base class for all errors raised by fhnsync."""

    #: short machine-readable category, printed by the CLI
    category = "error"


class ConfigError(FhnError, ValueError):
    category = "config"


class NoConvergence(FhnError, RuntimeError):
    category = "no-convergence"


class GridError(FhnError, ValueError):
    category = "grid"


class StabilityError(FhnError, FloatingPointError):
    category = "stability"


class EmptyDensity(FhnError, ValueError):
    category = "empty-density"


class MissingBuffer(FhnError, ValueError):
    category = "missing-buffer"


class RangeError(FhnError, ValueError):
    category = "range"


class TooShort(FhnError, ValueError):
    category = "too-short"


class OutOfBand(FhnError, ValueError):
    category = "out-of-band"


class IoError(FhnError, OSError):
    category = "io"
