"""Exception hierarchy shared by all modules."""


class MixedNormError(Exception):
    """Base class for all package errors."""


class ParameterError(MixedNormError):
    """A precondition on arguments was violated."""


class SamplingError(MixedNormError):
    """A sampled function produced a non-finite value."""


class FormatError(MixedNormError):
    """A field file is malformed or inconsistent."""


class EvaluationError(MixedNormError):
    """A symbol or quadrature produced an unusable value."""


class DecompositionError(MixedNormError):
    """A Calderon-Zygmund decomposition could not be constructed."""


class ConfigurationError(MixedNormError):
    """A run configuration fails its feasibility check."""
