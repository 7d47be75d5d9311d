"""Exception taxonomy shared by all kernel modules."""


class RoughForgeError(Exception):
    """Base class for all kernel errors."""


class StructuralError(RoughForgeError, ValueError):
    """Incompatible objects combined: mismatched alphabets, overlapping
    sub-alphabets, a letter without a base vector field."""


class PreconditionError(RoughForgeError, ValueError):
    """A documented precondition was violated (bad levels, bad intervals)."""


class DomainError(RoughForgeError, ValueError):
    """Input outside the mathematical domain of an operation, e.g. exp of a
    series with a nonzero empty-word coefficient."""


class DegeneracyError(RoughForgeError, ArithmeticError):
    """A numerically singular system where theory guarantees regularity."""


class CapacityError(RoughForgeError, RuntimeError):
    """A working truncation level beyond the configured maximum."""


class DivergenceError(RoughForgeError, ArithmeticError):
    """Numerical blow-up of a trajectory (polynomial fields may explode)."""


class ValidationError(RoughForgeError, ValueError):
    """Malformed external input (JSON schema violations); carries the name
    of the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
