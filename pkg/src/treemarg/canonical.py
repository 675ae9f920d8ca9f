"""Closed-form canonical joint distribution for a consistent tree model.

The canonical joint assigns to each full outcome the product of all edge
probabilities at that outcome divided by the product, over vertices, of the
vertex marginal raised to ``degree - 1``. It is the unique tree-Markov
(conditional-independence) distribution with the given edge marginals and
reproduces every edge distribution exactly.

Degenerate convention: if a vertex of degree at least two has zero marginal
probability at some outcome bit, every incident edge probability at that bit
is necessarily zero as well; the corresponding entries are defined to be
zero (0/0 is read as 0). This is the only choice that keeps the result
normalized and marginal-reproducing.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

from .errors import InconsistentModel
from .model import MarginalModel, check_consistency, vertex_marginal
from .prob import JointDist, make_joint, marginalize

if TYPE_CHECKING:  # pragma: no cover
    from .gluing import GlueFamily


def canonical_joint(model: MarginalModel) -> JointDist:
    """Evaluate the canonical product formula over sorted vertex order."""
    report = check_consistency(model)
    if not report.ok:
        raise InconsistentModel(
            f"model is inconsistent ({len(report.violations)} vertex-marginal "
            f"violations); first: {report.violations[0][0]}"
        )
    order = model.graph.vertices
    k = len(order)
    pos = {v: i for i, v in enumerate(order)}
    margs = {v: vertex_marginal(model, v).probs for v in order}
    degs = {v: model.graph.degree(v) for v in order}
    edge_probs = {e: model.edge_dist(*e).probs for e in model.graph.edges}

    entries = []
    for i in range(1 << k):
        def bit(v, _i=i):
            return (_i >> (k - 1 - pos[v])) & 1

        if any(degs[v] >= 2 and margs[v][bit(v)] == 0 for v in order):
            entries.append(Fraction(0))
            continue
        num = Fraction(1)
        for u, v in model.graph.edges:
            num *= edge_probs[(u, v)][(bit(u) << 1) | bit(v)]
        den = Fraction(1)
        for v in order:
            exponent = degs[v] - 1
            if exponent:
                den *= margs[v][bit(v)] ** exponent
        entries.append(num / den)
    return make_joint(order, entries)


def canonical_params(model: MarginalModel, family: "GlueFamily") -> tuple[Fraction, ...]:
    """Coordinates of the canonical joint in a glue family's parameters.

    The canonical joint is marginalized onto the family's result variables
    and read off at the family's parameter coordinates. For families built
    with canonical upstream choices these always lie inside the family's
    box; for other upstream choices they may not.
    """
    joint = canonical_joint(model)
    marg = marginalize(joint, family.result_vars)
    return tuple(marg.probs[c] for c in family.param_coords)
