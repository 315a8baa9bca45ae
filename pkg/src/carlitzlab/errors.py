"""Exception types shared across the kernel."""


class CarlitzLabError(Exception):
    """Base class for all package-specific errors."""


class ConfigMismatchError(CarlitzLabError, ValueError):
    """Operands belong to different field configurations."""


class UnsupportedFieldError(CarlitzLabError, ValueError):
    """Requested field parameters are outside the supported table range."""


class ZeroToPrecisionError(CarlitzLabError, ArithmeticError):
    """A series with no stored terms was used where a valuation is required."""


class InvalidExponentError(CarlitzLabError, ValueError):
    """An exponent denominator does not fit the (q-1)*q^s lattice."""


class DivergenceSuspectedError(CarlitzLabError, ArithmeticError):
    """Evaluation tail guard failed: term valuations stopped increasing."""


class InsufficientTailError(CarlitzLabError, ValueError):
    """Not enough profile entries beyond the requested tail start."""


class InadmissibleParameterError(CarlitzLabError, ValueError):
    """A hypergeometric denominator parameter collides with a bracket value."""
