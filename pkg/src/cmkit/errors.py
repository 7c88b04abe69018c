"""Exception hierarchy shared by all cmkit modules."""


class CMError(Exception):
    """Base class for every error raised by cmkit."""


class ParseError(CMError):
    """Raised when expression text does not match the grammar.

    Attributes
    ----------
    offset : int
        Byte offset into the source text where the problem was detected.
    """

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class DomainError(CMError, ValueError):
    """An argument lies outside the domain of a node or function."""


class NonFiniteError(CMError, ArithmeticError):
    """Evaluation overflowed to a non-finite value."""


class JetOverflowError(NonFiniteError):
    """Derivative propagation produced a non-finite value."""


class UnsupportedNodeError(CMError):
    """The node has no complex extension in this toolkit."""


class BranchCutError(DomainError):
    """A principal-branch function was evaluated on its branch cut."""


class DivergenceError(CMError):
    """An integral or series was detected to diverge."""


class ConvergenceError(CMError):
    """A numerical procedure ran out of budget before meeting its tolerance."""


class ConstraintError(CMError, ValueError):
    """Parameters or inputs violate a documented constraint."""


class NotComparableError(ConstraintError):
    """Two vectors are not ordered by majorization."""
