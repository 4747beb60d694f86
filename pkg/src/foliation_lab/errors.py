"""Exception hierarchy.

Every domain error carries its class name as the wire-level error name used by
the CLI (``{"error": "<Name>", "detail": ...}``).
"""


class FoliationError(Exception):
    """Base class for all domain errors raised by the library."""

    @property
    def name(self) -> str:
        return type(self).__name__


class Obstruction(FoliationError):
    pass


class DegenerateField(FoliationError):
    pass


class DegreeMismatch(FoliationError):
    pass


class InvariantLine(FoliationError):
    pass


class NotHomogeneous(FoliationError):
    pass


class EulerViolation(FoliationError):
    pass


class NonIsolatedSingularity(FoliationError):
    pass


class NonIsolated(NonIsolatedSingularity):
    pass


class NotFinite(FoliationError):
    pass


class InsufficientTruncation(FoliationError):
    pass


class NotReduced(FoliationError):
    pass


class Indistinguishable(FoliationError):
    pass


class RegularPoint(FoliationError):
    pass


class DepthExceeded(FoliationError):
    pass


class Unresolved(FoliationError):
    pass


class Collapse(FoliationError):
    pass


class DegreeTooSmall(FoliationError):
    pass


class Obstructed(Obstruction):
    pass


class TooFewTerms(FoliationError):
    pass


class DegeneratePencil(FoliationError):
    pass


class ResidueRelationViolated(FoliationError):
    pass


class InvalidParameters(FoliationError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ParseError(FoliationError):
    pass


class PreconditionFailed(FoliationError):
    pass
