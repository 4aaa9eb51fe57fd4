"""Shared exception types.

The command-line layer maps these onto process exit codes, so library code
should prefer them over bare ``ValueError``/``RuntimeError`` for anything a
caller may want to distinguish.
"""

from __future__ import annotations


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation.

    Examples: evaluating a curve piece where its formula is not real,
    requesting a control value outside the tabulated range, exceeding the
    harmonic cap of the trigonometric algebra.
    """


class ConvergenceError(RuntimeError):
    """An iterative computation failed to settle within its budget."""
