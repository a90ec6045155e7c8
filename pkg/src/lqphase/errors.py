"""Exception taxonomy shared by all modules.

The CLI maps these onto exit codes: usage/config/data errors -> 1,
enumeration budget errors -> 2, I/O errors -> 3.
"""


class DimensionError(ValueError):
    """Shapes of matrix/vector arguments are inconsistent."""


class ParameterError(ValueError):
    """A scalar parameter is outside its documented range."""


class ConfigurationError(ValueError):
    """A configuration object or named fixture is invalid."""


class DomainError(ValueError):
    """Input violates a mathematical precondition (names the failed condition)."""


class InvalidWitnessError(ValueError):
    """A null-space witness fails one of its membership conditions."""


class ResourceBudgetError(RuntimeError):
    """An enumeration guard (combinatorial budget) would be exceeded."""


class DegenerateProblemError(RuntimeError):
    """Problem data is rank-deficient where full rank is required."""


class InfeasibleProblemError(RuntimeError):
    """No feasible point exists for the requested constraints."""
