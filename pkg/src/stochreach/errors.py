class StochReachError(Exception):
    """Base class for library errors."""


class DimensionError(StochReachError, ValueError):
    pass


class DecompositionError(StochReachError):
    """A decomposition function produced an inverted box or was evaluated
    outside the argument orders it supports."""


class NumericalError(StochReachError, FloatingPointError):
    """Non-finite values appeared during propagation or simulation."""


class ConvergenceError(StochReachError, RuntimeError):
    pass


class ConfigError(StochReachError, ValueError):
    pass
