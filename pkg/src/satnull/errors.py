"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit with 1,
numerical failures with 2.
"""


class ConfigurationError(ValueError):
    """Invalid scenario, method tag, or algorithm configuration."""


class InfeasibleError(ConfigurationError):
    """A precoder construction has no feasible solution at these dimensions."""


class NumericalError(RuntimeError):
    """A numerical procedure failed at runtime."""


class DivergenceError(NumericalError):
    """An iterative optimization produced a non-finite cost."""
