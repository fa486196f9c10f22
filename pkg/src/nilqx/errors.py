"""Exception hierarchy. Every error carries a short machine-readable ``code``."""


class NilqxError(Exception):
    code = "error"
    exit_status = 2

    def __init__(self, detail="", code=None):
        super().__init__(detail)
        if code is not None:
            self.code = code
        self.detail = detail


class InputError(NilqxError):
    """Malformed input, unsupported request, or violated precondition."""

    code = "invalid-input"


class HypothesisError(NilqxError):
    """A required hypothesis does not hold for the given data."""

    code = "hypothesis-violated"


class SearchExhausted(NilqxError):
    code = "search-exhausted"
    exit_status = 3


class PolyDivisionByZero(InputError, ZeroDivisionError):
    code = "division-by-zero"
