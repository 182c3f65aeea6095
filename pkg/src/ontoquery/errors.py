"""Exception hierarchy shared across the package.

Every error carries a machine-readable ``code`` so the HTTP layer and the
CLI can map failures to structured payloads / exit statuses without
string-matching messages.
"""

from __future__ import annotations


class OntoQueryError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class MalformedIriError(OntoQueryError):
    code = "malformed-iri"


class TurtleSyntaxError(OntoQueryError):
    """Raised on unparseable Turtle input; carries the offending position."""

    code = "syntax-error"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnresolvedPrefixError(TurtleSyntaxError):
    code = "unresolved-prefix"


class UnknownClassError(OntoQueryError):
    code = "unknown-class"

    def __init__(self, iri):
        super().__init__(f"class not known to the schema: {iri}")
        self.iri = iri


class UnknownDatasetError(OntoQueryError):
    code = "unknown-dataset"


class InapplicablePropertyError(OntoQueryError):
    code = "inapplicable-property"


class IncompatibleTargetError(OntoQueryError):
    code = "incompatible-target"


class TypeMismatchError(OntoQueryError):
    code = "type-mismatch"


class DatatypeMismatchError(OntoQueryError):
    code = "datatype-mismatch"


class NothingToUndoError(OntoQueryError):
    code = "nothing-to-undo"


class NonLeafRemovalError(OntoQueryError):
    code = "non-leaf-removal"


class QueryTextError(OntoQueryError):
    """Raised on unparseable query text; carries the offending position."""

    code = "grammar-error"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownSymbolError(OntoQueryError):
    code = "unknown-symbol"


class UnflaggedColumnError(OntoQueryError):
    code = "unflagged-column"


class ExecutionCancelled(OntoQueryError):
    code = "cancelled"


class UnknownJobError(OntoQueryError):
    code = "unknown-job"


class SessionNotFoundError(OntoQueryError):
    code = "session-not-found"


class ConfigError(OntoQueryError):
    code = "config-error"
