"""Exception types raised across the package."""


class PointlikeError(Exception):
    """Base class for all errors raised by this package."""


class AssociativityViolation(PointlikeError):
    def __init__(self, x, y, z):
        self.triple = (x, y, z)
        super().__init__(f"(x*y)*z != x*(y*z) for (x, y, z) = {self.triple}")


class InvalidExponent(PointlikeError):
    pass


class NotPiPrimeOrder(InvalidExponent):
    """A mu-exponent was requested for an order that is not a pi'-number."""


class Unreachable(PointlikeError):
    pass


class IncompleteAutomaton(PointlikeError):
    pass


class UnknownLetter(PointlikeError):
    pass


class TermSyntaxError(PointlikeError, SyntaxError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class NotCyclicGroup(PointlikeError):
    pass


class NotInFamily(PointlikeError):
    pass


class FactorizationNotFound(PointlikeError):
    pass


class PreconditionFalsified(PointlikeError):
    """Inputs to a reduction were shown not to be equal over the target variety."""

    def __init__(self, message, counterexample=None):
        self.counterexample = counterexample
        super().__init__(message)


class TowerUndetermined(PointlikeError):
    pass


class NotIdempotentLike(PointlikeError):
    pass


class EmptyContent(PointlikeError):
    pass
