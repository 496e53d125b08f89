"""Exception hierarchy shared by every module."""


class KnotMoveError(Exception):
    """Base class for all errors raised by the package."""


class ParseError(KnotMoveError):
    """Input text could not be turned into a value."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class MalformedToken(ParseError):
    pass


class EdgeDegreeError(ParseError):
    pass


class DisconnectedSlot(ParseError):
    pass


class NonClosedComponent(ParseError):
    pass


class NonRealizable(ParseError):
    pass


class UnknownCatalogKey(KnotMoveError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class StaleSite(KnotMoveError):
    pass


class KindMismatch(KnotMoveError):
    pass


class DisconnectedDiagram(KnotMoveError):
    pass


class OddRank(KnotMoveError):
    pass


class NotAKnot(KnotMoveError):
    pass


class DimensionMismatch(KnotMoveError):
    pass


class SameComponentBand(KnotMoveError):
    pass


class OrientationClash(KnotMoveError):
    pass


class FaceMismatch(KnotMoveError):
    pass


class ArfObstruction(KnotMoveError):
    pass


class ImproperInput(KnotMoveError):
    pass


class MalformedShape(KnotMoveError):
    pass


class ScriptSyntaxError(ParseError):
    """Script text violates the grammar; carries the expected tokens."""

    def __init__(self, message, line=None, column=None, expected=()):
        self.expected = tuple(expected)
        if self.expected:
            message = f"{message} (expected {', '.join(self.expected)})"
        super().__init__(message, line, column)


class UnknownVerb(ScriptSyntaxError):
    pass


class StepFailure(KnotMoveError):
    def __init__(self, message, step=None, state=None):
        self.step = step
        self.state = state
        super().__init__(message if step is None else f"step {step}: {message}")


class InvariantViolation(KnotMoveError):
    pass


class ClaimMismatch(KnotMoveError):
    def __init__(self, clause, message):
        self.clause = clause
        super().__init__(f"{clause}: {message}")
