"""Exception types shared across the library."""


class PierScourError(Exception):
    """Base class for all library-specific errors."""


class ConfigurationError(PierScourError, ValueError):
    """Invalid optimizer settings, search bounds, or run configuration."""


class ValidationError(PierScourError, ValueError):
    """A record or argument violates its documented invariants."""


class SchemaError(ValidationError):
    """An input file does not match the expected column layout."""


class DegenerateObjectiveError(PierScourError, RuntimeError):
    """Every objective evaluation in one swarm iteration was non-finite."""


class MissingInputError(PierScourError, ValueError):
    """A formula was asked to run on a record lacking a required input."""


class CrossScaleError(PierScourError, ValueError):
    """A model was applied to a record that cannot supply its features."""


class ModelFileError(PierScourError, ValueError):
    """A serialized model file is malformed or violates model invariants."""


class SensitivityError(PierScourError, RuntimeError):
    """Every model specification in a sensitivity run failed."""
