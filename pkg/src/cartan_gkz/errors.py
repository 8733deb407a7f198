class CapacityError(RuntimeError):
    """A bounded search or brute-force computation ran out of room.

    Raised with enough context to retry with a larger bound.
    """


class NumericalError(ArithmeticError):
    """A floating point quantity could not be rounded unambiguously."""
