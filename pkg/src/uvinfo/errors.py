"""Exception hierarchy.

The CLI maps each family onto an exit code, so keep the split meaningful:
user errors (2), internal invariant failures (3), search budget (4),
infeasible configurations (5).
"""

from __future__ import annotations


class UVError(Exception):
    """Base class for everything raised by this package."""


class InputError(UVError, ValueError):
    """Malformed input or a violated precondition on user data."""


class UnknownVariableError(InputError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return Exception.__str__(self)


class EmptyConditionError(InputError):
    """Conditioning on a value combination that no sample realizes."""


class InvariantError(UVError, AssertionError):
    """Two routes that must agree did not; indicates a bug."""


class SearchBudgetExceeded(UVError):
    """Exact search ran out of time or size budget.

    ``best_size``/``best_witness`` carry the best independent set found so
    far, which is still a valid lower bound.
    """

    def __init__(self, message: str, best_size: int = 0, best_witness: tuple = ()):
        super().__init__(message)
        self.best_size = best_size
        self.best_witness = best_witness


class InfeasibleError(UVError):
    """No coder-estimator can be built within the requested limits."""


class UnsupportedStructureError(InputError):
    """Plant matrix is not in a form the constructive coder handles."""


class InsufficientMarginError(UVError):
    """Disturbance too large for the coder's contraction margin."""

    def __init__(self, message: str, critical_c):
        super().__init__(message)
        self.critical_c = critical_c
