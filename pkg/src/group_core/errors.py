"""Exception hierarchy shared by every package."""

from __future__ import annotations


class F2SumsetError(ValueError):
    """Base class for errors raised by the sumset toolkit."""


class ContextMismatchError(F2SumsetError):
    """Operands live in groups of different rank."""


class EmptySetError(F2SumsetError):
    """An operation that needs a non-empty set received an empty one."""


class ParameterError(F2SumsetError):
    """A numeric or structural parameter is out of range."""


class PreconditionError(F2SumsetError):
    """The inputs do not satisfy the operation's documented preconditions."""


class RankCapError(F2SumsetError):
    """The requested rank exceeds the configured cap for the operation."""


class ConstructionError(F2SumsetError):
    """A construction was asked for parameters that do not yield the family."""


class CertificateFormatError(F2SumsetError):
    """A serialized certificate or witness could not be decoded."""


class StructureSearchError(F2SumsetError):
    """No Lev decomposition exists for a pair that should have one."""


class LiteralParseError(F2SumsetError):
    """A set literal is malformed; `offset` points at the offending character."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
