"""Exception types shared across the toolkit.

Domain verdicts ("this graph is not reduced", "sigma is not injective")
are returned as data by the operations that produce them; exceptions are
reserved for violated preconditions and resource caps.
"""


class TreecohError(Exception):
    """Base class for all toolkit errors."""


class DocumentError(TreecohError):
    """Input document fails schema or cross-reference validation."""


class DisconnectedGraph(TreecohError):
    pass


class UnknownVertex(TreecohError):
    pass


class UnknownEdge(TreecohError):
    pass


class UndecidableContraction(TreecohError):
    """Symbolic edge map without a surjectivity assertion."""


class UndecidableIndex(TreecohError):
    """Symbolic edge map without an index assertion."""


class UndecidableCardinality(TreecohError):
    pass


class CapExceeded(TreecohError):
    """Group enumeration exceeded the configured element cap."""


class NotASubgroup(TreecohError):
    pass


class MissingPresentation(TreecohError):
    """Symbolic vertex group without an attached presentation."""


class SymbolicGroupInWord(TreecohError):
    """Word arithmetic requires every local group to be enumerated."""


class BallTooLarge(TreecohError):
    """Cover ball construction exceeded the configured vertex cap."""


class OutOfBall(TreecohError):
    """Requested vertex or orbit lies beyond the ball radius."""


class NotEdgeFixed(TreecohError):
    """Edge family component is not fixed by its edge group."""


class NotASemidirectInstance(TreecohError):
    """Graph is not a single loop with bijective edge maps."""


class NotATransversal(TreecohError):
    pass


class HypothesisNotAsserted(TreecohError):
    """A required vanishing/amenability flag is missing."""


class MissingEdgeBetti(TreecohError):
    """No Betti value available for an edge group at the needed degree."""


class NotReduced(TreecohError):
    pass


class WrongClass(TreecohError):
    """Operation only defined for spherical/trivial representation classes."""


class InvalidDescriptor(TreecohError):
    pass


class UnknownSelector(TreecohError):
    pass


class UnknownExample(TreecohError):
    pass
