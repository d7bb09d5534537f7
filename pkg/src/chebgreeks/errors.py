"""Exception types raised across the package."""


class DegenerateGridError(ValueError):
    """Grid has repeated abscissas, so barycentric weights do not exist."""


class OutOfDomainError(ValueError):
    """Evaluation point lies outside the interpolation domain."""


class InsufficientNodesError(ValueError):
    """Too few nodes to build a differential matrix of the requested order."""


class UnsupportedOracleError(ValueError):
    """No closed-form reference is available for the payoff."""


class PricerError(RuntimeError):
    """A pricing callback failed at a particular spot.

    The failing spot is kept on ``spot`` so sweep reports can record it.
    """

    def __init__(self, message: str, spot: float):
        super().__init__(message)
        self.spot = spot


class ConfigError(ValueError):
    """Experiment configuration is incomplete or inconsistent."""
