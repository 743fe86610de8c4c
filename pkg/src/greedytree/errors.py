"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class GreedyTreeError(Exception):
    """Base class for all package errors."""


class NotGraphicTree(GreedyTreeError, ValueError):
    """The integer list does not generate a tree."""


class TooSmall(GreedyTreeError, ValueError):
    """Fewer than two entries: no tree has a single vertex with degree data."""


class NoInternalVertex(GreedyTreeError, ValueError):
    """Huffman construction needs at least one vertex of degree >= 2."""


class RootIsLeaf(GreedyTreeError, ValueError):
    """A directed tree must be rooted at an internal vertex."""


class BudgetExceeded(GreedyTreeError, RuntimeError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"enumeration needs {count} labeled decodes, budget is {budget}")
        self.count = count
        self.budget = budget


class LengthMismatch(GreedyTreeError, ValueError):
    """Sequences compared by weak majorization must have equal length."""


class Asymmetric(GreedyTreeError, ValueError):
    """Matrix handed to the spectral solver is not symmetric."""


class NotConverged(GreedyTreeError, RuntimeError):
    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"power iteration did not converge after {iterations} iterations "
            f"(residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual
