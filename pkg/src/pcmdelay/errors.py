"""Exception hierarchy shared across the package."""


class PcmError(Exception):
    """Base class for all errors raised by pcmdelay."""


class ParameterError(PcmError, ValueError):
    """A distribution or sampling parameter is outside its domain."""


class ShapeError(PcmError, ValueError):
    """Dimension mismatch between a multi-index, point, or matrix."""


class RootRangeError(PcmError, ValueError):
    """Requested Hermite root order is outside the supported range."""


class PlanningError(PcmError):
    """Not enough admissible collocation candidates for the basis."""


class SingularSystemError(PcmError):
    """The collocation system stays rank deficient after augmentation."""


class BindingError(PcmError, KeyError):
    """A gate model input binding is missing or not understood."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class DomainError(PcmError, ValueError):
    """A physical value is outside the range the gate model accepts."""


class ExternalModelError(PcmError):
    """An external simulator run failed, timed out, or printed garbage."""

    def __init__(self, message, output="", sample_index=None):
        super().__init__(message)
        self.output = output
        self.sample_index = sample_index


class SpecError(PcmError, ValueError):
    """A problem-spec document fails schema or semantic validation."""
