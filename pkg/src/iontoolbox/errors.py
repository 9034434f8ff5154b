"""Exception types raised by the toolbox."""


class CapacityError(ValueError):
    """A matrix or state would exceed the configured dimension limit."""


class NotHermitianError(ValueError):
    """A generator passed to an exponential is not Hermitian."""


class NumericalError(RuntimeError):
    """Base class for failures detected while a simulation is running."""


class LeakageError(NumericalError):
    """Population reached the top of a truncated Fock ladder."""


class StepSizeError(ValueError):
    """The integration step does not resolve the fastest frequency."""
