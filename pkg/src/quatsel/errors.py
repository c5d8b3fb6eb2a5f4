"""Exception types shared across the package."""


class QuatselError(Exception):
    """Base class for all errors raised by quatsel."""


class InputError(QuatselError, ValueError):
    """An argument violates a documented precondition."""


class FieldMismatch(InputError):
    """Objects over different base fields were combined."""


class ResourceRefusal(QuatselError):
    """A computation would exceed a configured search bound."""


class SearchExhausted(ResourceRefusal):
    """A bounded search ran out of candidates (raise the bound and retry)."""


class InconsistencyError(QuatselError, AssertionError):
    """An internal consistency check failed; indicates a bug."""


class EichlerConditionFailed(QuatselError):
    """Every archimedean place of the base field ramifies in the algebra."""


class AssumptionsNotMet(QuatselError):
    """The exact selectivity criterion does not apply to this input.

    ``failed`` names the violated hypotheses: ``"coprime_disc_level"``
    and/or ``"level_coprime_ramification"``.
    """

    def __init__(self, failed, message=None):
        self.failed = tuple(failed)
        if message is None:
            message = "selectivity criterion is silent here; failed: " + ", ".join(self.failed)
        super().__init__(message)
