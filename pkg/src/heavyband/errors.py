"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Inconsistent parameters, e.g. an exponent outside its admissible window."""


class DomainError(ValueError):
    """Argument outside the domain of a formula."""


class ValidationError(ValueError):
    """Input data (pattern, matrix file) failed a structural check."""


class BoundsError(IndexError):
    """Requested more items than exist."""


class NumericError(RuntimeError):
    """An iterative routine failed to converge."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class PreconditionError(ValueError):
    """A theorem-style check was called on an instance that does not meet its hypotheses."""


class IntegrityError(RuntimeError):
    """Stored study data does not match its checksum."""


class SchemaVersionError(RuntimeError):
    """Stored study data was written with an incompatible schema."""


class TheoremViolation(AssertionError):
    """A deterministic inequality failed on an instance meeting its hypotheses (a solver defect)."""
