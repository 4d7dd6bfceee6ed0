"""
Exception hierarchy for the balance-law solver.
Every failure raised by the package derives from SolverError.
"""

from typing import Optional, Sequence


class SolverError(Exception):
    """Base class for all solver failures."""


class ConfigurationError(SolverError, ValueError):
    """Invalid configuration value, key, offset or boundary kind."""


class InputError(SolverError, ValueError):
    """Non-finite data passed to an entry point."""


class StateError(SolverError, ValueError):
    """Inadmissible physical state (nonpositive depth, density or pressure)."""


class NumericalError(SolverError):
    """An iterative procedure failed to converge or a step bound was hit."""


class HyperbolicityLost(SolverError):
    """A matrix that should have a real spectrum has complex eigenvalues."""


class RecoveryError(SolverError):
    """
    Conserved variables could not be recovered from equilibrium variables.

    Attributes:
        cells: Flat indices of the failing entries (may be empty)
        stage: Pipeline stage that triggered the failure, if known
    """

    def __init__(self, message: str, cells: Optional[Sequence[int]] = None,
                 stage: Optional[str] = None):
        self.cells = list(cells) if cells is not None else []
        self.stage = stage
        details = message
        if stage:
            details = f"[{stage}] {details}"
        if self.cells:
            shown = self.cells[:10]
            more = "" if len(self.cells) <= 10 else f" (+{len(self.cells) - 10} more)"
            details = f"{details}; cells {shown}{more}"
        super().__init__(details)
