"""Exception types shared across the package."""


class AltitudeError(Exception):
    """Base class for expected failures: bad input, exhausted budgets."""


class GraphError(AltitudeError):
    """Invalid graph construction, parameters, or graph file input."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BudgetError(AltitudeError):
    """A height-budget precondition failed."""


class GameRuleError(AltitudeError):
    """A token-game move violates the rules; the message names the rule."""


class EnumerationLimitError(AltitudeError):
    """Exact enumeration refused because the instance is too large."""


class InternalInvariantError(Exception):
    """A property the algorithms guarantee was violated; always a bug.

    Deliberately not an AltitudeError: callers that map expected failures
    to exit code 1 must let this one escape with exit code 2.
    """
