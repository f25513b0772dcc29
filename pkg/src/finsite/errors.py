"""Exception hierarchy shared by all finsite modules.

Every domain error derives from :class:`FinsiteError` and carries a stable
``error_name`` used by the CLI when serializing failures.
"""
from __future__ import annotations


class FinsiteError(Exception):
    """Base class for all domain errors raised by this package."""

    @property
    def error_name(self) -> str:
        return type(self).__name__


# -- finite categories --------------------------------------------------------

class MissingComposite(FinsiteError):
    pass


class AssociativityViolation(FinsiteError):
    pass


class IdentityViolation(FinsiteError):
    pass


class DanglingEndpoint(FinsiteError):
    pass


class FormatError(FinsiteError):
    """Malformed JSON/DSL input file."""


# -- sieves and topologies -----------------------------------------------------

class BaseMismatch(FinsiteError):
    pass


class ExplosionGuard(FinsiteError):
    """An enumeration would exceed the configured combinatorial bound."""


class RightOreRequired(FinsiteError):
    pass


class NotContaining(FinsiteError):
    pass


class AmbiguousMaximum(FinsiteError):
    """A lattice scan found no unique maximum; candidates are attached."""

    def __init__(self, message: str, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)

    @property
    def error_name(self) -> str:
        return "Ambiguous"


# -- geometric logic -----------------------------------------------------------

class TheorySyntaxError(FinsiteError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        position = "" if line is None else f" at line {line}" + ("" if column is None else f", column {column}")
        super().__init__(message + position)
        self.line = line
        self.column = column

    @property
    def error_name(self) -> str:
        return "SyntaxError"


class SortError(TheorySyntaxError):
    @property
    def error_name(self) -> str:
        return "SortError"


class UnknownSymbol(TheorySyntaxError):
    @property
    def error_name(self) -> str:
        return "UnknownSymbol"


class NotFirstOrder(FinsiteError):
    pass


class SignatureMismatch(FinsiteError):
    pass


# -- bridge --------------------------------------------------------------------

class InconsistentRealization(FinsiteError):
    pass
