"""Minimal set of custom exceptions for unscathed."""

from typing import TYPE_CHECKING, Any, List, Optional

from rich.panel import Panel

from .console import console

if TYPE_CHECKING:  # pragma: no cover
    from .models import VerificationReport

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_NOT_CONVERGED = 2
EXIT_USAGE = 64


class UnscathedError(Exception):
    """Base exception for unscathed with optional exit code."""

    def __init__(self, message: str, *, exit_code: int = 1, displayed: bool = False):
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code
        self.displayed = displayed

    def __str__(self) -> str:  # pragma: no cover - simple accessor
        return self.message


class ValidationError(UnscathedError):
    """Raised when user input validation fails."""

    def __init__(self, message: str, *, exit_code: int = EXIT_USAGE, displayed: bool = False):
        super().__init__(message, exit_code=exit_code, displayed=displayed)


class DomainError(UnscathedError, ValueError):
    """Raised when an operation is evaluated outside its mathematical domain."""

    def __init__(self, message: str, *, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class InfeasibleIntervalError(DomainError):
    """Raised when a coordinate slice of a box-and-sum set is empty."""


class IntegrationError(UnscathedError):
    """Raised when an integrand returns a non-finite value at a node."""

    def __init__(self, message: str, *, nodes: Optional[List[List[float]]] = None):
        super().__init__(message)
        self.nodes = nodes or []


class NonConvergenceError(UnscathedError):
    """Raised when a computation exhausts its budget before meeting its tolerance."""

    def __init__(self, message: str, *, exit_code: int = EXIT_NOT_CONVERGED, displayed: bool = False):
        super().__init__(message, exit_code=exit_code, displayed=displayed)


class SimulationError(UnscathedError):
    """Raised when a simulated configuration exceeds its safety cap."""


class StorageError(UnscathedError):
    """Raised when result storage operations fail."""


class VerificationFailure(UnscathedError):
    """Raised when one or more verification checks fail."""

    def __init__(
        self,
        message: str,
        *,
        reports: Optional[List["VerificationReport"]] = None,
        exit_code: int = EXIT_VERIFICATION_FAILED,
        displayed: bool = False,
    ):
        super().__init__(message, exit_code=exit_code, displayed=displayed)
        self.reports = reports or []

    def print(self) -> None:
        detail = ""
        for report in self.reports:
            if report.passed:
                continue
            detail += f"[bold]{report.check}[/bold]\n"
            for witness in report.witnesses[:5]:
                detail += f"  {witness}\n"
        if detail:
            console.print(Panel(detail.rstrip()))
        console.print(f"[red]{self.message}[/red]")
