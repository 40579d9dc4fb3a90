"""Exception types shared across the package."""


class HyperlabError(Exception):
    """Base class for all package-specific errors."""


class NotAPrime(HyperlabError, ValueError):
    """Modulus failed the deterministic primality check or is even/too small."""


class DivisionByZero(HyperlabError, ZeroDivisionError):
    """Inversion of zero in F_p."""


class ModulusMismatch(HyperlabError, ValueError):
    """Two operands built over different prime moduli were combined."""


class InvalidArgument(HyperlabError, ValueError):
    """Argument outside the documented domain of an operation."""


class EmptyInput(HyperlabError, ValueError):
    """An operation that needs at least one element received none."""


class InvalidSpec(HyperlabError, ValueError):
    """Set-spec literal rejected; carries the character position when known."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ResourceLimit(HyperlabError, RuntimeError):
    """Enumeration would exceed the configured budget; message states the need."""

    def __init__(self, message: str, required: int | None = None, budget: int | None = None):
        self.required = required
        self.budget = budget
        if required is not None and budget is not None:
            message = f"{message}: requires {required}, budget {budget}"
        super().__init__(message)
