"""Exception hierarchy.

Every error carries a ``category`` string that the command line front end
reports verbatim and maps onto an exit code.
"""


class DiracJCError(Exception):
    category = "error"


class ConfigError(DiracJCError, ValueError):
    """Invalid parameters or a malformed scenario file."""

    category = "config"


class DomainError(DiracJCError, ValueError):
    """Argument outside the domain of a special function or backend."""

    category = "domain"


class ConvergenceError(DiracJCError, ArithmeticError):
    category = "convergence"


class SeriesConvergenceError(ConvergenceError):
    """A power series hit its term cap before the tail became negligible."""


class StepSizeUnderflow(ConvergenceError):
    """The adaptive integrator could not meet its tolerances."""

    def __init__(self, t, h):
        super().__init__(f"step size underflow at t={t!r} (h={h!r})")
        self.t = t
        self.h = h


class TruncationError(DiracJCError):
    """Coherent-state truncation leaves too much Poisson weight behind."""

    category = "truncation"


class ConservationError(ConvergenceError):
    """Conserved charge drifted beyond the allowed bound during a run."""


class NoAnalyticBackend(DiracJCError):
    category = "no-analytic"


class ValidationFailure(DiracJCError):
    """Analytic and numeric backends disagree beyond the declared tolerance."""

    category = "validation"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}
