"""Exception types shared across the package.

Exit-code mapping used by the CLI: FormatError (and other I/O trouble)
exits with 2, BudgetError and CodeSearchError exit with 3.
"""


class HammctrError(Exception):
    """Base class for all package-specific errors."""


class FormatError(HammctrError):
    """Malformed instance or formula file. Carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetError(HammctrError):
    """An enumeration, memory or time budget would be exceeded."""


class CodeSearchError(HammctrError):
    """Constant-weight code search exhausted without meeting the distance floor."""

    def __init__(self, message, achieved_words=0, achieved_distance=None):
        self.achieved_words = achieved_words
        self.achieved_distance = achieved_distance
        super().__init__(message)
