"""Exception hierarchy.

Special-function failures derive from SpecfunError so callers can catch
them as a group when they bubble up through the propagator kernels.
"""


class WeylBianchiError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(WeylBianchiError):
    """Input outside the domain of validity of an operation."""


class NumericalError(WeylBianchiError):
    """A computation produced a non-finite value (silent NaN is forbidden)."""


class SpecfunError(WeylBianchiError):
    """Base class for special-function evaluation failures."""


class PoleError(SpecfunError):
    """Evaluation at a pole (e.g. gamma at a non-positive integer)."""


class ConvergenceError(SpecfunError):
    """A series or expansion failed to reach the requested tolerance."""


class BranchError(SpecfunError):
    """Argument on a branch cut where the principal value is ambiguous."""


class QuadratureError(WeylBianchiError):
    """Adaptive quadrature exhausted its subdivision budget."""


class ToleranceError(WeylBianchiError):
    """The ODE step controller could not satisfy the requested tolerances."""


class ZeroDenominatorError(WeylBianchiError):
    """The Bessel-kernel normalizer Z(0) is numerically zero."""


class ConfigError(WeylBianchiError):
    """Malformed configuration file or request."""
