"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` that the CLI copies into
its structured error object.
"""


class CosmeroError(Exception):
    code = "error"


class DomainError(CosmeroError, ValueError):
    code = "domain"


class TruncationError(CosmeroError, ValueError):
    code = "truncation"


class ValidationError(CosmeroError, ValueError):
    code = "validation"


class ConsistencyError(CosmeroError, AssertionError):
    code = "consistency"


class NilpotencyError(ConsistencyError):
    code = "nilpotency"

    def __init__(self, message, degree=None, column=None):
        super().__init__(message)
        self.degree = degree
        self.column = column


class UnsupportedOperation(CosmeroError, TypeError):
    code = "unsupported"
