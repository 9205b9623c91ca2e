"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Matrix or coefficient string has an unusable shape."""


class DomainError(ValueError):
    """Argument lies outside the domain of the operation."""


class ConvergenceError(RuntimeError):
    """An iterative kernel hit its iteration cap."""


class DegenerateSpectrumError(ValueError):
    """Eigenvalues too close together for a measure-based computation."""


class NotCyclicError(ValueError):
    """The first basis vector is not cyclic for the given matrix."""


class StratificationError(ValueError):
    """A value is neither near-real nor matched with its conjugate."""
