"""Exception and warning types shared across the package."""


class ThermobandError(Exception):
    """Base class for all package errors."""


class ValidationError(ThermobandError):
    """Invalid user input: configuration, ratios or material data."""


class NonPositiveDefinite(ValidationError):
    pass


class InconsistentRatios(ValidationError):
    pass


class UnknownFunction(ValidationError):
    pass


class SolverError(ThermobandError):
    """A numerical stage failed."""


class PartitionMismatch(SolverError):
    pass


class SolvabilityViolated(SolverError):
    pass


class DegenerateCoefficient(SolverError):
    pass


class IncompleteSet(SolverError):
    pass


class SingularLeadingBlock(SolverError):
    pass


class ExponentialDivergence(SolverError):
    pass


class ConditioningWarning(UserWarning):
    pass


class BranchCountMismatch(ThermobandError):
    """Two curve sets disagree on the number of branches (reported, not raised
    by :func:`thermoband.toolkit.compare`)."""
