"""Exception types shared across reslab.

Validation problems derive from :class:`ValueError` so callers that only care
about bad input can catch the builtin; numerical failures derive from
:class:`ConvergenceError`.
"""


class ReslabError(Exception):
    """Base class for all reslab errors."""


class DomainError(ReslabError, ValueError):
    """Argument outside the documented evaluation domain."""


class PoleError(DomainError):
    """Evaluation at a pole (e.g. a spherical Hankel function at z = 0)."""


class OrderOverflowError(DomainError):
    """Requested order exceeds the supported maximum."""


class DegenerateMetricError(DomainError):
    """First fundamental form is singular or badly conditioned."""


class CurvatureError(DomainError):
    """Nonpositive curvature where strict convexity is required."""


class ConvergenceError(ReslabError, ArithmeticError):
    """A numerical procedure failed to converge."""


class BoundaryZeroError(ConvergenceError):
    """A zero sits on (or too close to) an argument-principle contour."""


class ResolutionError(ConvergenceError):
    """Sampling or grid resolution is too coarse for the requested accuracy."""


class MissingModeError(DomainError):
    """A resonance set lacks entries for required angular modes."""
