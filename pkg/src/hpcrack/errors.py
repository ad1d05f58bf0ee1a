"""Exception and warning types raised by hpcrack."""


class HpcrackError(Exception):
    """Base class for library errors."""


class DomainError(HpcrackError, ValueError):
    """An argument lies outside the domain of a formula."""


class ResolutionError(HpcrackError, ValueError):
    """A grid is too coarse (or malformed) for the requested operation."""


class SingularChartError(HpcrackError, ArithmeticError):
    """A surface metric is degenerate at the evaluation point."""


class SolverError(HpcrackError, ArithmeticError):
    """A linear solve failed or produced non-finite output."""


class IndefiniteFormError(SolverError):
    """A discrete energy that should be coercive was not positive definite."""


class AccuracyWarning(UserWarning):
    """A computation ran with settings known to limit its accuracy."""


class IllConditioningWarning(UserWarning):
    """A linear system's estimated condition number is very large."""
