"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class EdgeListError(ValueError):
    """Malformed edge-list text. ``lineno`` is 1-based."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class GenerationError(RuntimeError):
    """A random graph with the requested properties could not be produced."""

    def __init__(self, message, attempts):
        super().__init__(f"{message} (after {attempts} attempts)")
        self.attempts = attempts


class FitError(ValueError):
    pass


class NumericWarning(RuntimeWarning):
    """A quantity is close enough to a singularity that results may be unreliable."""


class ParityWarning(RuntimeWarning):
    """Walkers sit on opposite sides of a bipartite graph and can never meet."""
