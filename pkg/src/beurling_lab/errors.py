"""Exception types shared across the package."""

import numpy as np


class DomainError(ValueError):
    """Argument sits on a pole or outside a function's domain."""


class UnsupportedRangeError(ValueError):
    """Argument is valid mathematically but beyond what the evaluator supports."""


class BudgetExceededError(RuntimeError):
    """Requested tolerance would need more work than the configured budget."""


class FactorizationError(np.linalg.LinAlgError):
    """Cholesky factorization failed; carries a suggested ridge to retry with."""

    def __init__(self, message, condition_estimate, suggested_ridge):
        super().__init__(message)
        self.condition_estimate = condition_estimate
        self.suggested_ridge = suggested_ridge
