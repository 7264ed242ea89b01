"""Exception hierarchy shared by all pminsurf modules.

Domain errors (a query hit the singular set, left a grid, asked for an
undefined limit, ...) are signalled with exceptions derived from
``PMinSurfError`` so that callers, and the CLI in particular, can map them
to a single exit code.
"""


class PMinSurfError(Exception):
    """Base class for all domain errors raised by pminsurf."""


class SingularError(PMinSurfError):
    """The query point is at (or within tolerance of) the singular set."""

    def __init__(self, message, d_value=None):
        super().__init__(message)
        self.d_value = d_value


class StartSingularError(SingularError):
    """A characteristic trace was started on the singular set."""


class OutOfDomainError(PMinSurfError):
    """A field evaluation left the region where the field is defined."""


class NotSingularError(PMinSurfError):
    """A singular-set operation was applied to a nonsingular point."""


class NotOnSingularCurveError(PMinSurfError):
    """Trace extension requested through a point that is not on a singular curve."""


class AmbiguousTangentError(PMinSurfError):
    """The one-sided tangent at a singular hit could not be estimated reliably."""


class UnstableWindingError(PMinSurfError):
    """The winding number did not stabilize under radius shrinking."""


class RankFullError(PMinSurfError):
    """Curve continuation hit a point where the U matrix has no kernel."""


class BadParamsError(PMinSurfError):
    """Parameters violate a constructor precondition (normalization, range...)."""


class VerticalRulingError(PMinSurfError):
    """The Monge slope is undefined: the ruling through the point is vertical."""


class NotMinimalError(PMinSurfError):
    """An operation that requires a p-minimal field was given a non-minimal one."""


class SupportViolationError(PMinSurfError):
    """A variation field's support certificate is violated (or meets the singular set)."""


class SingularInDomainError(PMinSurfError):
    """The base field has singular points inside a domain that must be singular-free."""


class NotOnSphereError(PMinSurfError):
    """A point expected on the unit 3-sphere is off it beyond tolerance."""


class InvalidPairError(PMinSurfError):
    """A claimed Legendrian great-circle pair violates the contact condition."""


class AtPoleError(PMinSurfError):
    """The Cayley transform was evaluated at its excluded pole."""
