"""
Error types raised by the engine and the verification harness.

Every error derives from MaxnormError and from the builtin that matches its
nature, so callers can catch either the project type or the builtin one.
"""


class MaxnormError(Exception):
    """Base class for all engine errors."""


class DegreeMismatchError(MaxnormError, ValueError):
    """Two operands act on different numbers of points."""


class PreconditionError(MaxnormError, ValueError):
    """An operation was called outside its precondition (non-subgroup, non-normal, non-prime...)."""


class CapExceededError(MaxnormError, RuntimeError):
    """An enumeration cap refused the request. No partial output is ever returned."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class BudgetExhaustedError(MaxnormError, RuntimeError):
    """A search ran out of its candidate budget without deciding."""


class CatalogError(MaxnormError, KeyError):
    """Unknown catalog entry, or a builder that produced the wrong group."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "catalog error"


class GroupFileError(MaxnormError, ValueError):
    """Malformed group file, or an expect-order line that does not match."""

    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line
