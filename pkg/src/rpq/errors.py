"""Exception hierarchy shared by every module of the engine."""


class RPQError(Exception):
    """Base class for all errors raised by :mod:`rpq`."""


class ParseError(RPQError, ValueError):
    """Malformed graph, automaton, walk, regex or CNF text.

    ``line`` is 1-based for line-oriented formats, ``position`` is a 0-based
    character offset for the query grammar.
    """

    def __init__(self, message, line=None, position=None):
        self.line = line
        self.position = position
        where = ""
        if line is not None:
            where = f"line {line}: "
        elif position is not None:
            where = f"position {position}: "
        super().__init__(where + message)


class ValidationError(RPQError, ValueError):
    """A structure violates its invariants (dangling vertex, unknown label...)."""


class UnknownVertexError(ValidationError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InvalidWalkError(ValidationError):
    """A vertex/edge sequence is not a walk of the database it is checked against."""


class PreconditionError(RPQError, ValueError):
    """An operation was called outside its documented domain."""


class UnboundedResultError(PreconditionError):
    """The requested bag is infinite (walk semantics without a length cap)."""


class GuardExceeded(RPQError):
    """An exponential procedure hit its configured instance-size or step guard."""
