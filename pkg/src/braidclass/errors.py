"""Exception hierarchy shared by every module."""


class BraidClassError(Exception):
    """Base class for all errors raised by the library."""


class IndexOutOfRange(BraidClassError, IndexError):
    pass


class MismatchedParent(BraidClassError, ValueError):
    pass


class MismatchedGroup(BraidClassError, ValueError):
    pass


class NotNormal(BraidClassError, ValueError):
    pass


class NonCommutingPair(BraidClassError, ValueError):
    pass


class BoundExceeded(BraidClassError):
    def __init__(self, what: str, size: int, bound: int):
        super().__init__(f"{what}: size {size} exceeds bound {bound}")
        self.size = size
        self.bound = bound


class InvalidSubgroup(BraidClassError, ValueError):
    pass


class InvalidCocycle(BraidClassError, ValueError):
    pass


class ParseError(BraidClassError, ValueError):
    pass


class NotAGroup(BraidClassError, ValueError):
    """Raised when a table fails a group axiom; `axiom` names it and
    `witness` holds the offending elements."""

    def __init__(self, axiom: str, witness=()):
        super().__init__(f"not a group: {axiom} fails at {tuple(witness)}")
        self.axiom = axiom
        self.witness = tuple(witness)
