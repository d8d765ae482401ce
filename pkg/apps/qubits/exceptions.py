class Bell4Error(Exception):
    """Base error for every failure raised by the bell4 apps."""


class InvalidInputError(Bell4Error, ValueError):
    """
    Input violates a precondition (non-unit vector, bad slot, non-normalized
    state, ...). Commands exit with code 2.
    """


class NumericalInvariantError(Bell4Error, ArithmeticError):
    """
    An internal numerical invariant failed (omega above 16, non-monotone
    sweep, irreproducible optimum). This always indicates a bug; commands
    exit with code 3.
    """
