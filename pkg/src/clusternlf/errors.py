"""Exception hierarchy shared by the engine.

Each class maps to a distinct CLI exit code (see ``clusternlf.cli``).
"""


class ClusterError(Exception):
    """Base class for all engine errors."""


class RankMismatch(ClusterError, ValueError):
    pass


class DivisionNotExact(ClusterError, ArithmeticError):
    """A Laurent division left a nonzero remainder.

    Cluster variables are Laurent polynomials in the initial cluster, so this
    always indicates an upstream bug; mutation must abort.
    """


class NotSkewSymmetrizable(ClusterError, ValueError):
    pass


class DirectionOutOfRange(ClusterError, IndexError):
    pass


class SignCoherenceViolated(ClusterError):
    pass


class BudgetExceeded(ClusterError):
    """Enumeration stopped before closure; the graph is partial."""


class NotAFace(ClusterError, ValueError):
    pass


class FalsificationEvent(ClusterError):
    """A theorem-level claim failed on concrete data."""


class NoCompletion(FalsificationEvent):
    pass


class MultipleCompletions(FalsificationEvent):
    pass
