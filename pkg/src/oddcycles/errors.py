"""Exception types shared across the package.

Plain ``ValueError`` is raised for malformed caller input (bad arguments,
unparseable files).  The classes below cover the remaining failure modes.
"""


class MalformedEmbeddingError(ValueError):
    """A rotation system does not match its graph (missing vertex, wrong
    neighbor multiset, duplicate entries)."""


class NotATumorGraphError(ValueError):
    """A (graph, B) pair violates the basic degree condition: some vertex
    outside B has three or more neighbors inside B."""


class InvariantViolationError(RuntimeError):
    """An internal structural guarantee failed (non-planar intermediate,
    impossible case reached, accounting identity broken)."""


class BudgetExceededError(RuntimeError):
    """An enumeration walked more search nodes than the configured budget."""

    def __init__(self, budget: int):
        super().__init__(f"enumeration exceeded node budget of {budget}")
        self.budget = budget
