"""Exception types shared across the package.

Domain verdicts (validation violations, equivalence results, membership
rejections) are returned as data; exceptions are reserved for misuse of an
operation or for search budgets running out.
"""


class StagedTreeError(Exception):
    """Base class for all domain errors."""


class SymbolRepeat(StagedTreeError):
    """A primitive symbol occurred twice in one monomial (non-square-free)."""


class MissingSymbol(StagedTreeError):
    """A parameter assignment does not cover a required symbol."""


class NormalizationViolation(StagedTreeError):
    """A floret's parameter values do not sum to one."""


class NodeTooSmall(StagedTreeError):
    """A factorization node has fewer than two entries."""


class BudgetExceeded(StagedTreeError):
    """A bounded search was truncated before it could prove its answer."""


class TwinNotFound(StagedTreeError):
    """The given twin descriptor does not locate a twin in the tree."""


class NotStaged(StagedTreeError):
    """A naive swap produced a tree that violates stage structure."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class InvalidSite(StagedTreeError):
    """A resize site fails the validity conditions (stage leakage or
    non-equivalent subgraphs)."""


class FactorizationMismatch(StagedTreeError):
    """A factorization does not expand to the floret it should replace."""


class ParseError(StagedTreeError):
    """Input text does not conform to the tree format or the polynomial
    grammar."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" at line {line}, column {column}"
        super().__init__(message + loc)
        self.line = line
        self.column = column
