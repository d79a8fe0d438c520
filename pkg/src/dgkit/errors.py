"""Exception hierarchy shared across the toolkit."""


class DgkitError(Exception):
    """Base class for all toolkit errors."""


class FieldMismatchError(DgkitError):
    """Operands live over different scalar fields."""


class ShapeError(DgkitError):
    """Matrix or complex shapes are incompatible."""


class ValidationError(DgkitError):
    """A structural invariant failed at construction time.

    The message names the offending entity and, where meaningful, the degree.
    """


class DegreeCapError(ValidationError):
    """A graded object exceeds the configured degree-support cap."""


class WindowCertificationError(DgkitError):
    """A derived computation could not be certified on the requested window."""

    def __init__(self, message, first_uncertified_degree=None):
        super().__init__(message)
        self.first_uncertified_degree = first_uncertified_degree


class ScenarioError(DgkitError):
    """Scenario file failed to parse or validate.

    ``location`` is a JSON-pointer-ish path into the offending document.
    """

    def __init__(self, message, location=""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
