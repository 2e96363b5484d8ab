"""Exception types shared across the package.

Every domain error maps to CLI exit code 1; malformed input specs raise
``SpecError`` (exit code 2) instead.
"""

from __future__ import annotations


class ConformableError(Exception):
    """Base class for domain errors."""


class EmptyScale(ConformableError):
    """A time scale was built from an empty segment list."""


class NotInScale(ConformableError):
    """A point lies outside the time scale."""


class NotInScaleKappa(ConformableError):
    """A point lies outside the kappa-truncated scale."""


class DegenerateScale(ConformableError):
    """A kappa truncation would empty the scale."""


class BudgetTooSmall(ConformableError):
    """A sampling budget cannot cover the mandatory points."""


class StencilFailure(ConformableError):
    """No numerical room for a one-sided difference stencil."""


class ReversedBounds(ConformableError):
    """Integration bounds given in the wrong order."""


class BadParam(ConformableError):
    """A parameter is outside its admissible range."""


class KernelSingular(ConformableError):
    """The kernel pair vanishes somewhere on the working scale."""


class RepeatedRoot(ConformableError):
    """The characteristic polynomial has a double root (unsupported case)."""


class SingularWronskian(ConformableError):
    """The candidate fundamental pair has vanishing Wronskian at the anchor."""


class ComplexResidue(ConformableError):
    """A result expected to be real carries a non-negligible imaginary part."""


class BadCase(ConformableError):
    """Unknown identity-case identifier."""


class NotRegressive(ConformableError):
    """A regressivity condition fails along the evaluation path."""

    def __init__(self, witness, value=None, message=None):
        self.witness = witness
        self.value = value
        if message is None:
            message = f"regressivity fails at t={witness!r} (factor={value!r})"
        super().__init__(message)


class SpecError(Exception):
    """A scale/kernel/problem spec could not be parsed."""
