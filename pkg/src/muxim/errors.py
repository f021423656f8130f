"""Exception types shared across the package."""


class MultiplexError(ValueError):
    """Invalid multiplex structure (bad edge, duplicate layer, self-loop, ...)."""


class ManifestError(ValueError):
    """Malformed manifest or edge file; message carries file and line context."""


class UnsupportedModelError(ValueError):
    """An algorithm was asked to run on a diffusion model it cannot handle."""


class EnumerationLimitError(RuntimeError):
    """Exact enumeration refused: too many random dimensions in the instance."""


class InfeasibleError(ValueError):
    """Knapsack instance admits no feasible solution under the budget."""
