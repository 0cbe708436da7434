"""Exception hierarchy shared by all modules."""


class MatinvError(Exception):
    pass


class DomainMismatchError(MatinvError, TypeError):
    """Two operands live over different coefficient domains."""


class DegenerateInputError(MatinvError, ValueError):
    """Input is the zero polynomial, an all-zero tuple, or similar."""


class InvalidSizeError(MatinvError, ValueError):
    pass


class InvalidInputError(MatinvError, ValueError):
    pass


class InexactDivisionError(MatinvError, ArithmeticError):
    """An exact division left a nonzero remainder.

    Raised where the division is an identity (e.g. removing ``Pi**(q-2)``),
    so it always indicates a bug rather than bad input.
    """


class ChartDomainError(MatinvError, ValueError):
    """A normalization entry required by a chart inverse vanishes."""


class ProbeFailureError(MatinvError, RuntimeError):
    pass


class ScopeError(MatinvError, ValueError):
    pass
