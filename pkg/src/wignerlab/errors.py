"""Exception hierarchy.

The CLI maps these onto its exit codes: ``ValidationError`` and subclasses
exit 2, ``DegenerateError`` and subclasses exit 3.
"""


class WignerLabError(Exception):
    """Base class for all library errors."""


class GridMismatchError(WignerLabError, ValueError):
    """Two objects live on different grids or carry different hbar."""


class ValidationError(WignerLabError, ValueError):
    """An input failed a physical admissibility check."""

    def __init__(self, message, reports=None):
        super().__init__(message)
        self.reports = list(reports or [])


class DecayError(ValidationError):
    """A wavefunction does not vanish at the grid boundary."""


class ImpureStateError(ValidationError):
    """A Wigner function fails the pure-state condition."""


class NonHermitianError(ValidationError):
    """An operator expected to be hermitian (or unitary) is not."""


class DegenerateError(WignerLabError, ArithmeticError):
    """A numerical quantity needed for division vanishes."""


class AnchorError(DegenerateError):
    """An anchor coordinate has (near) zero marginal density."""


class GridTooLargeError(WignerLabError, ValueError):
    """The direct oracle path was asked to run on too large a grid."""


class FormatError(WignerLabError, ValueError):
    """A file does not parse as the expected format."""
