"""Cycle-free complementarity graphs with one pairwise distribution per edge.

A :class:`MarginalModel` is a tree whose every edge (u, v) carries a joint
distribution of the two incident binary variables. Edge distributions are
stored under a canonical orientation (smaller label first) and re-oriented on
demand, so the stored direction never leaks into results.

Consistency means: for every vertex, all incident edges induce the identical
single-vertex marginal. On a tree this is exactly the condition under which
a global joint distribution reproducing all edge distributions exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    CycleDetected,
    Disconnected,
    DuplicateEdge,
    DuplicateLabel,
    InconsistentAtVertex,
    ModelStructureError,
    SelfLoop,
    UnknownLabel,
)
from .prob import JointDist, make_joint, marginalize, permute_vars


@dataclass(frozen=True)
class ProbReport:
    """Outcome of a probabilistic check: ok iff there are no violations.

    Each violation is a triple ``(description, lhs, rhs)`` of a failed exact
    equality.
    """

    violations: tuple[tuple[str, Fraction, Fraction], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _canon_pair(u, v) -> tuple:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class TreeGraph:
    """A validated tree: sorted vertex tuple plus canonically oriented edges."""

    vertices: tuple
    edges: tuple[tuple, ...]

    def degree(self, v) -> int:
        if v not in self.vertices:
            raise UnknownLabel(f"unknown vertex {v!r}")
        return sum(1 for e in self.edges if v in e)

    def neighbors(self, v) -> tuple:
        if v not in self.vertices:
            raise UnknownLabel(f"unknown vertex {v!r}")
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return tuple(sorted(out))


def build_tree(vertices: Iterable, edges: Iterable[tuple]) -> TreeGraph:
    """Validate that ``edges`` form a tree over ``vertices``.

    Raises :class:`SelfLoop`, :class:`DuplicateEdge`, :class:`UnknownLabel`,
    :class:`CycleDetected` or :class:`Disconnected` as appropriate. Vertex
    labels must be mutually orderable (all ints or all strings).
    """
    verts = tuple(vertices)
    if len(set(verts)) != len(verts):
        raise DuplicateLabel(f"duplicate vertices in {verts!r}")
    verts = tuple(sorted(verts))
    vset = set(verts)

    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    canon = []
    seen = set()
    for u, v in edges:
        if u == v:
            raise SelfLoop(f"self-loop at {u!r}")
        if u not in vset or v not in vset:
            raise UnknownLabel(f"edge ({u!r},{v!r}) references an unknown vertex")
        key = _canon_pair(u, v)
        if key in seen:
            raise DuplicateEdge(f"edge {key!r} given twice")
        seen.add(key)
        ru, rv = find(u), find(v)
        if ru == rv:
            raise CycleDetected(f"edge {key!r} closes a cycle")
        parent[ru] = rv
        canon.append(key)
    if len({find(v) for v in verts}) > 1:
        raise Disconnected("graph is not connected")
    return TreeGraph(verts, tuple(sorted(canon)))


@dataclass(frozen=True)
class MarginalModel:
    """A tree plus one validated pairwise distribution per edge.

    ``dists[i]`` is the distribution of ``graph.edges[i]`` over that edge's
    canonical orientation. Use :meth:`edge_dist` to retrieve a distribution
    in either variable order.
    """

    graph: TreeGraph
    dists: tuple[JointDist, ...]

    def edge_dist(self, u, v) -> JointDist:
        key = _canon_pair(u, v)
        try:
            idx = self.graph.edges.index(key)
        except ValueError:
            raise UnknownLabel(f"no edge ({u!r},{v!r}) in the model") from None
        d = self.dists[idx]
        return d if d.vars == (u, v) else permute_vars(d, (u, v))


def build_model(tree: TreeGraph, edge_dists: Mapping[tuple, object]) -> MarginalModel:
    """Attach one distribution to every tree edge.

    ``edge_dists`` maps unordered edge pairs to either a :class:`JointDist`
    over those two variables (any orientation) or a 4-entry sequence of
    rational values interpreted over the key's written order.
    """
    if not tree.edges:
        raise ModelStructureError("a marginal model needs at least one edge")
    resolved: dict[tuple, JointDist] = {}
    for pair, value in edge_dists.items():
        u, v = pair
        key = _canon_pair(u, v)
        if key not in tree.edges:
            raise ModelStructureError(f"distribution given for non-edge ({u!r},{v!r})")
        if key in resolved:
            raise ModelStructureError(f"two distributions given for edge {key!r}")
        if isinstance(value, JointDist):
            if set(value.vars) != {u, v}:
                raise ModelStructureError(
                    f"distribution for edge {key!r} is over {value.vars!r}"
                )
            dist = value
        else:
            dist = make_joint((u, v), value)
        resolved[key] = dist if dist.vars == key else permute_vars(dist, key)
    missing = [e for e in tree.edges if e not in resolved]
    if missing:
        raise ModelStructureError(f"no distribution for edges {missing!r}")
    return MarginalModel(tree, tuple(resolved[e] for e in tree.edges))


def check_consistency(model: MarginalModel) -> ProbReport:
    """Check that all edges incident to each vertex agree on its marginal.

    Never raises; every violated equality is reported with both sides. A
    single-edge model is always consistent.
    """
    violations = []
    for v in model.graph.vertices:
        incident = [e for e in model.graph.edges if v in e]
        if len(incident) < 2:
            continue
        ref_edge = incident[0]
        ref = marginalize(model.edge_dist(*ref_edge), (v,)).probs
        for e in incident[1:]:
            got = marginalize(model.edge_dist(*e), (v,)).probs
            for bit in (0, 1):
                if got[bit] != ref[bit]:
                    violations.append(
                        (
                            f"vertex {v!r}: p({v!r}={bit}) from edge {e!r} "
                            f"vs edge {ref_edge!r}",
                            got[bit],
                            ref[bit],
                        )
                    )
    return ProbReport(tuple(violations))


def vertex_marginal(model: MarginalModel, v) -> JointDist:
    """The single-vertex distribution of ``v`` common to all incident edges.

    Raises :class:`InconsistentAtVertex` if the incident edges disagree.
    """
    incident = [e for e in model.graph.edges if v in e]
    if not incident:
        raise UnknownLabel(f"unknown vertex {v!r}")
    ref = marginalize(model.edge_dist(*incident[0]), (v,))
    for e in incident[1:]:
        got = marginalize(model.edge_dist(*e), (v,))
        if got != ref:
            raise InconsistentAtVertex(
                f"edges {incident[0]!r} and {e!r} disagree on p({v!r}): "
                f"{ref.probs} vs {got.probs}"
            )
    return ref
