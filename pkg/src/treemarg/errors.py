"""Exception hierarchy for the treemarg package.

Every library error derives from :class:`TreeMarginalError` so callers can
catch one base class. Most errors also derive from ``ValueError`` because
they signal invalid input values.
"""


class TreeMarginalError(Exception):
    """Base class for all treemarg errors."""


# --- rational literals and probability vectors -------------------------------

class ParseError(TreeMarginalError, ValueError):
    """Text does not match the rational grammar ``[-]digits[/digits]``."""


class ZeroDenominator(ParseError):
    """Rational literal with denominator zero."""


class NotNormalized(TreeMarginalError, ValueError):
    """Probability entries do not sum to exactly one."""


class NegativeEntry(TreeMarginalError, ValueError):
    """A probability entry is negative."""


class LengthMismatch(TreeMarginalError, ValueError):
    """A sequence has the wrong length for its context."""


class DuplicateLabel(TreeMarginalError, ValueError):
    """A variable label occurs more than once."""


class UnknownLabel(TreeMarginalError, ValueError):
    """A referenced variable or edge does not exist."""


class NotAPermutation(TreeMarginalError, ValueError):
    """Requested variable order is not a permutation of the existing one."""


# --- graphs and marginal models -----------------------------------------------

class SelfLoop(TreeMarginalError, ValueError):
    """An edge connects a vertex to itself."""


class DuplicateEdge(TreeMarginalError, ValueError):
    """The same unordered vertex pair appears twice in the edge list."""


class CycleDetected(TreeMarginalError, ValueError):
    """The edge set contains a cycle."""


class Disconnected(TreeMarginalError, ValueError):
    """The graph is not connected."""


class ModelStructureError(TreeMarginalError, ValueError):
    """Edge distributions do not line up one-to-one with graph edges."""


class InconsistentAtVertex(TreeMarginalError, ValueError):
    """Edges incident to a vertex disagree on its single-variable marginal."""


class InconsistentModel(TreeMarginalError, ValueError):
    """The model fails the vertex-marginal consistency check."""


# --- gluing -------------------------------------------------------------------

class VariableCollision(TreeMarginalError, ValueError):
    """Glue inputs do not each contribute exactly one fresh variable."""


class OverlapMismatch(TreeMarginalError, ValueError):
    """Glue inputs disagree on their shared overlap marginal."""


class ParamOutOfBox(TreeMarginalError, ValueError):
    """A chosen parameter lies outside its closed admissible interval."""


class NotAPath(TreeMarginalError, ValueError):
    """Graph is not a simple path."""


class NotAStar(TreeMarginalError, ValueError):
    """Graph is not a star (one center adjacent to all other vertices)."""


# --- oracle -------------------------------------------------------------------

class TooLarge(TreeMarginalError, ValueError):
    """Instance exceeds the configured size cap for exact solving."""


class ResolutionZero(TreeMarginalError, ValueError):
    """Scan resolution must be a positive integer."""


# --- instance files -----------------------------------------------------------

class InstanceSyntaxError(TreeMarginalError, ValueError):
    """Instance text is not well-formed (carries a location message)."""


class InstanceSemanticError(TreeMarginalError, ValueError):
    """Instance text is well-formed but violates the format's rules."""
