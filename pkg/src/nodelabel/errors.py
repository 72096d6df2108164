"""Exception taxonomy shared across the package.

Every error raised by the library derives from NodeLabelError so callers can
catch library failures without swallowing unrelated bugs.
"""


class NodeLabelError(Exception):
    pass


class ParameterError(NodeLabelError, ValueError):
    """A constructor or generator argument violates its stated range."""


class UsageError(NodeLabelError, ValueError):
    """An operation was called outside its precondition."""


class ParseError(NodeLabelError, ValueError):
    """Malformed graph input; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IllegalActionError(NodeLabelError, ValueError):
    """An MDP action failed the extensibility test."""


class ShapeError(NodeLabelError, ValueError):
    """Tensor operands have incompatible shapes; names both sides."""


class DomainError(NodeLabelError, ValueError):
    """A numeric op left its domain (log of non-positive, non-finite input)."""


class NumericError(NodeLabelError, RuntimeError):
    """Training produced a non-finite loss or gradient."""


class CheckpointError(NodeLabelError, ValueError):
    """Checkpoint file is unreadable or inconsistent with the model."""


class BudgetExceededError(NodeLabelError, RuntimeError):
    """Exact search ran out of its node budget; carries the bounds found."""

    def __init__(self, message, lower=None, upper=None, witness=None, explored=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
        self.witness = witness
        self.explored = explored
