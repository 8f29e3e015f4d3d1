"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: bad user input exits 2, a failed
check exits 1, and internal-consistency errors are never caught (they
certify a bug, not a bad input).
"""


class SegalForgeError(Exception):
    """Base class for all library errors."""


class InputError(SegalForgeError):
    """Malformed or incompatible input data (boundary mismatch, bad JSON, ...)."""


class ResourceError(SegalForgeError):
    """A configured bound was exceeded (set too large, truncation too small)."""


class TruncationError(ResourceError):
    """A computation needs simplicial levels beyond the stored truncation."""

    def __init__(self, required: int, available: int, what: str = "") -> None:
        self.required = required
        self.available = available
        msg = f"needs levels up to {required}, but truncation is {available}"
        if what:
            msg = f"{what}: {msg}"
        super().__init__(msg)


class ValidationError(SegalForgeError):
    """Input data fails a mathematical precondition that is checked, not assumed."""


class CoherenceError(ValidationError):
    """Lax-structure data violates the coherence equation.

    Carries the triple of composable arrows where the equation failed.
    """

    def __init__(self, triple, message: str = "coherence equation fails") -> None:
        self.triple = triple
        super().__init__(f"{message} at {triple!r}")


class InternalError(SegalForgeError):
    """A verified-by-construction invariant failed; this is a bug certificate."""
