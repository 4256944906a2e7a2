class RandomPickError(Exception):
    """Base class for library errors."""


class InfeasibleError(RandomPickError, ValueError):
    """Parameters are well-formed but admit no solution (e.g. budget too large)."""


class SizeLimitError(RandomPickError, ValueError):
    """Input exceeds what an exact oracle can enumerate."""


class GraphFormatError(RandomPickError, ValueError):
    """Malformed edge-list, state or profile file."""


class ConvergenceError(RandomPickError, RuntimeError):
    """An iterative method did not reach its tolerance within the iteration budget."""
