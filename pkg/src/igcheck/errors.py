"""Exception types raised across the package.

Everything user-facing derives from IgcheckError so callers can catch one
type at the boundary.  Structured fields (position, code, pointer) carry
machine-readable detail for tests and the CLI.
"""


class IgcheckError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(IgcheckError, ValueError):
    """A function was called with an argument outside its contract."""


class FormulaSyntaxError(IgcheckError):
    """The concrete formula syntax could not be parsed."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


class WellFormednessError(IgcheckError):
    """A structurally valid formula violates a side condition.

    `code` identifies which condition failed, e.g. 'lfp-not-positive' or
    'vacuous-quantifier'.
    """

    def __init__(self, code, message):
        self.code = code
        super().__init__(f"{code}: {message}")


class MacroError(IgcheckError):
    """A formula file definition is unusable (cycle, arity, redefinition)."""


class VocabularyError(IgcheckError):
    """A formula mentions an atom the graph does not interpret."""


class QueryError(IgcheckError):
    """A query cannot be evaluated as posed (e.g. free set variables)."""


class ResourceError(IgcheckError):
    """A guard against runaway table or node counts fired."""


class NonMonotoneFixpointError(IgcheckError):
    """A fixpoint stage shrank, so the body is not monotone in practice.

    Syntactic positivity admits counting comparators that are antitone in
    the iterated set; evaluation detects the violation and refuses to
    report a verdict instead of looping or guessing.
    """


class InstanceError(IgcheckError):
    """An instance file or in-memory instance fails validation.

    `pointer` is a JSON-pointer-like path to the offending field when the
    error comes from a file.
    """

    def __init__(self, message, pointer=None):
        self.pointer = pointer
        if pointer:
            message = f"{pointer}: {message}"
        super().__init__(message)
