"""Exception hierarchy shared by all ch2lab modules."""


class Ch2LabError(Exception):
    """Base class for errors raised by ch2lab."""


class RejectedInputError(Ch2LabError, ValueError):
    """Input data violates a precondition (non-finite samples, negative weights...)."""


class IncompatibleGridError(Ch2LabError, ValueError):
    pass


class OrderOverflowError(Ch2LabError, ValueError):
    """Requested derivative order exceeds the configured j_max."""


class DivergentIntegralError(Ch2LabError, ValueError):
    pass


class InadmissibleDatumError(Ch2LabError, ValueError):
    """Initial datum is outside the space a theorem requires."""


class DegenerateDatumError(Ch2LabError, ValueError):
    pass


class StepSizeError(Ch2LabError, ValueError):
    pass


class BlowupError(Ch2LabError, ArithmeticError):
    """Time integration produced non-finite values.

    ``time`` is the time of the failed step and ``last_good`` the last finite
    state (or trajectory) when one is available.
    """

    def __init__(self, message, time=None, last_good=None):
        super().__init__(message)
        self.time = time
        self.last_good = last_good


class OverflowSeriesError(Ch2LabError, ArithmeticError):
    def __init__(self, message, last_order=None):
        super().__init__(message)
        self.last_order = last_order


class InsufficientDataError(Ch2LabError, ValueError):
    pass


class IndeterminateRadiusError(Ch2LabError, ValueError):
    pass


class ConfigError(Ch2LabError, ValueError):
    """Configuration parse/validation failure; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
