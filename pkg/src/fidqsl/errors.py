"""Exception types shared across the package.

The CLI maps these onto exit codes, so the hierarchy matters: anything
derived from ``InvalidStateError`` is a state-invariant failure and
anything derived from ``NumericalError`` is a numerical failure.
"""


class DimensionError(ValueError):
    """Operands have incompatible dimensions."""


class InvalidStateError(ValueError):
    """A matrix violates a density-matrix invariant."""


class NotHermitianError(InvalidStateError):
    pass


class NotPSDError(InvalidStateError):
    pass


class NumericalError(ArithmeticError):
    """Base class for failures of a numerical procedure."""


class SingularDecayRateError(NumericalError):
    """The decay rate diverges because G(t) vanishes."""


class NearPuritySingularityError(NumericalError):
    """The speed integrand cannot be evaluated at an exactly pure state."""


class BoundInconsistencyError(NumericalError):
    """Zero average speed together with a fidelity below one."""


class CoarseGridError(ValueError):
    """Integration grid too coarse for the kernel's memory time."""
