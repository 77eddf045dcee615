"""Exception hierarchy for the stability laboratory.

Each error also derives from the closest builtin so callers that only know about
``ValueError`` or ``LookupError`` keep working.
"""

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from app.models.allocation import SolverReport


class LabError(Exception):
    """Base class for every error raised by the laboratory."""


class InvalidSpec(LabError, ValueError):
    """A scenario specification or network violates its structural invariants."""


class UnknownLink(LabError, LookupError):
    """A link id does not resolve inside the network."""


class DomainError(LabError, ValueError):
    """A function was evaluated outside its domain (e.g. nonpositive rate)."""


class Infeasible(LabError):
    """The constraint set of an optimisation problem is empty."""


class InfeasibleFloor(Infeasible):
    """The per-path rate floors alone overload at least one link."""


class NoConvergence(LabError):
    """The solver hit its iteration cap or stalled above the tolerance."""

    def __init__(self, message: str, report: Optional["SolverReport"] = None):
        super().__init__(message)
        self.report = report


class TooLarge(LabError, ValueError):
    """The brute-force oracle was asked to enumerate too many paths."""


class InvalidStep(LabError, ValueError):
    """Integration step is nonpositive or longer than the horizon."""


class NumericalBlowup(LabError, ArithmeticError):
    """A trajectory left the physically meaningful range."""


class DimensionMismatch(LabError, ValueError):
    """Two vectors that must be compared have different lengths."""


class AllocationMismatch(LabError, ValueError):
    """An allocation does not cover exactly the paths of the network."""


class EmptyTrajectory(LabError, ValueError):
    """A trajectory has no samples to assess."""


class ConfigError(LabError, ValueError):
    """An experiment document is malformed or violates a nested invariant."""


class UnknownPreset(ConfigError, LookupError):
    """No preset exists under the requested name."""


class ReportIOError(LabError, OSError):
    """A report or trajectory could not be written to its destination."""
