"""
Exception hierarchy for effham.

Every error raised on purpose by the library derives from ``EffHamError``.
The two middle layers tell the CLI how to exit:

- ``InputError``: malformed matrices, bad indices, invalid configuration (exit 2)
- ``ComputationError``: the numerics refused (degenerate gap, resonance, ...) (exit 3)
- ``AcceptanceError``: a ``--check`` flag found a mismatch (exit 4)
"""

from typing import Optional, Tuple


class EffHamError(Exception):
    """Base class for all effham errors."""

    exit_code = 1


class InputError(EffHamError, ValueError):
    """Invalid input data."""

    exit_code = 2


class DimensionMismatchError(InputError):
    """Operands do not have compatible shapes."""


class NotHermitianError(InputError):
    """A numeric matrix is too far from Hermitian to be symmetrized."""


class InvalidIndexError(InputError):
    """A basis index, pair or label is out of range."""


class ComputationError(EffHamError, ArithmeticError):
    """A computation could not be carried out on valid input."""

    exit_code = 3


class DegenerateGapError(ComputationError):
    """Generator construction hit a vanishing energy gap."""

    def __init__(self, pair: Tuple[int, int], gap: float):
        self.pair = pair
        self.gap = gap
        super().__init__(
            f"degenerate gap {gap!r} on pair {pair}; route this coupling through NPAD instead"
        )


class StaleRotationError(ComputationError):
    """A Givens rotation was applied to a matrix it was not built from."""


class NonConvergenceError(ComputationError):
    """An iterative eigensolver ran out of sweeps."""


class UnboundParameterError(ComputationError):
    """An expression references a parameter missing from the environment."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound parameter '{name}'")


class DomainError(ComputationError):
    """Division by zero or square root of a negative number during evaluation."""

    def __init__(self, message: str, path: str):
        self.path = path
        super().__init__(f"{message} at {path}")


class BoundHypothesisError(ComputationError):
    """The truncation error bound is requested outside its hypothesis."""


class RegimeError(ComputationError):
    """An approximation is evaluated outside its regime of validity."""


class ResonanceError(ComputationError):
    """A closed-form expression hits a vanishing denominator."""

    def __init__(self, denominator: str, value: Optional[float] = None):
        self.denominator = denominator
        self.value = value
        super().__init__(f"resonant denominator {denominator} = {value!r}")


class AcceptanceError(EffHamError):
    """A reproduction check failed."""

    exit_code = 4
