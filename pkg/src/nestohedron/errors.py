"""Exception hierarchy.

``InvalidInput`` covers malformed or non-building input (CLI exit code 1).
``VerificationError`` covers a failed structural check (CLI exit code 2);
raising one means an implementation bug, since every checked property is
a theorem about building sets.
"""

from __future__ import annotations


class NestedError(Exception):
    pass


class InvalidInput(NestedError, ValueError):
    pass


class EmptySetMember(InvalidInput):
    def __init__(self):
        super().__init__("building sets may not contain the empty set")


class MissingSingleton(InvalidInput):
    def __init__(self, element: int):
        self.element = element
        super().__init__(f"singleton {{{element + 1}}} is missing")


class UnionNotClosed(InvalidInput):
    def __init__(self, first: int, second: int):
        from .bitsets import label

        self.first, self.second = first, second
        super().__init__(
            f"{label(first)} and {label(second)} intersect but their union "
            f"{label(first | second)} is missing"
        )


class OutOfGround(InvalidInput):
    pass


class EmptyRestriction(InvalidInput):
    pass


class EmptyGround(InvalidInput):
    pass


class NotAMember(InvalidInput):
    pass


class NotAVertex(InvalidInput):
    def __init__(self, subset: int):
        from .bitsets import label

        self.subset = subset
        super().__init__(f"{label(subset)} is not a vertex of the nested complex")


class NotLinkable(InvalidInput):
    pass


class NotMaximal(InvalidInput):
    pass


class NotAdjacent(InvalidInput):
    pass


class WrongDimension(InvalidInput):
    pass


class LengthMismatch(InvalidInput):
    pass


class TooLarge(NestedError):
    pass


class VerificationError(NestedError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class FanViolation(VerificationError):
    pass


class SingularSystem(VerificationError):
    pass


class ConvexityViolation(VerificationError):
    pass


class NormalFanMismatch(VerificationError):
    pass


class ComplexViolation(VerificationError):
    """Purity, exchange, regularity or connectivity failed."""
