"""Request-response games: winners, value bounds and optimal finite-state strategies."""

__version__ = "0.1.0"
