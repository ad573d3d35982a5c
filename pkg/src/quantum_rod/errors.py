"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A physical or numerical parameter is outside its allowed range."""


class DomainError(ValueError):
    """A coordinate or energy argument lies outside the domain of validity."""


class ResolutionError(RuntimeError):
    """The requested quantity is not resolved at the current grid resolution."""


class RegimeError(RuntimeError):
    """The requested quantity has no solution in this semiclassical regime."""


class InsufficientBasisError(RuntimeError):
    """An eigenbasis expansion failed to capture the state to tolerance."""


class StepSizeError(RuntimeError):
    """Time integration became inaccurate at the chosen step size."""
