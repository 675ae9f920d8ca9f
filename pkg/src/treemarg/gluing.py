"""Parametrized families of joints gluing two distributions over an overlap.

Gluing two joints X over S + {x} and Y over S + {y} that agree on their
overlap marginal S produces the family of all joints Z over (x, S..., y)
whose marginals onto the two inputs reproduce them exactly. For each overlap
outcome o the four entries Z(x, o, y) form a 2x2 table with fixed row sums
X(0,o), X(1,o) and column sums Y(o,0), Y(o,1); choosing the corner
t_o = Z(0, o, 0) determines the block:

    Z(0,o,1) = X(0,o) - t_o
    Z(1,o,0) = Y(o,0) - t_o
    Z(1,o,1) = X(1,o) - Y(o,0) + t_o

Nonnegativity of all four entries confines t_o to the closed interval

    [ max(0, X(0,o) - Y(o,1), Y(o,0) - X(1,o)),  min(X(0,o), Y(o,0)) ]

which is never empty when the inputs are consistent. Blocks are independent,
so the feasible set is exactly the product of these intervals: one free
parameter per overlap outcome, 2**|S| in total. In the result vector the
parameters sit at the even 0-based coordinates of the x=0 half (odd 1-based
positions).

Whole trees are covered by schedules of such glue steps. A schedule adds one
vertex at a time; extending a built joint J by a new leaf v glues J (whose
fresh variable is a leaf w of the covered subtree) with a recursively built
extension of J's marginal without w, bottoming out at single edges. Every
step's overlap precondition then holds by construction. Downstream boxes
depend on upstream parameter choices, so a schedule is executed with either
explicit per-step choices or a named policy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .canonical import canonical_joint
from .errors import (
    InconsistentModel,
    LengthMismatch,
    NotAPath,
    NotAStar,
    OverlapMismatch,
    ParamOutOfBox,
    UnknownLabel,
    VariableCollision,
)
from .model import MarginalModel, check_consistency
from .prob import JointDist, as_rational, make_joint, marginalize, permute_vars

ZERO = Fraction(0)

#: Named parameter-choice policies for executing a schedule.
POLICIES = ("canonical", "midpoint", "lower", "upper")


@dataclass(frozen=True)
class GlueFamily:
    """All joints reproducing two glued inputs, as a box-parametrized family.

    ``result_vars``  ordered variables of the result, (x, overlap..., y).
    ``param_coords`` result-vector index of each free parameter, ordered by
                     overlap outcome.
    ``box``          closed interval (lo, hi) per parameter.
    ``affine``       per result entry a triple (const, sign, param) meaning
                     entry = const + sign * params[param].
    """

    result_vars: tuple
    param_coords: tuple[int, ...]
    box: tuple[tuple[Fraction, Fraction], ...]
    affine: tuple[tuple[Fraction, int, int], ...]

    @property
    def num_params(self) -> int:
        return len(self.param_coords)

    def contains(self, params: Sequence[Fraction]) -> bool:
        """Closed, componentwise box membership."""
        if len(params) != self.num_params:
            return False
        return all(lo <= p <= hi for p, (lo, hi) in zip(params, self.box))


def glue_pair(left: JointDist, right: JointDist, overlap: Iterable) -> GlueFamily:
    """Glue ``left`` over S + {x} with ``right`` over S + {y}, S = overlap.

    The inputs must agree exactly on their S-marginal (no tolerance). The
    overlap variables keep the order they have in ``left``; the result order
    is (x, S..., y) with x's bit most significant.
    """
    sset = set(overlap)
    for lab in sset:
        if lab not in left.vars:
            raise UnknownLabel(f"overlap variable {lab!r} not in left input {left.vars!r}")
        if lab not in right.vars:
            raise UnknownLabel(f"overlap variable {lab!r} not in right input {right.vars!r}")
    extra_left = [v for v in left.vars if v not in sset]
    extra_right = [v for v in right.vars if v not in sset]
    if len(extra_left) != 1 or len(extra_right) != 1:
        raise VariableCollision(
            f"each input must have exactly one variable outside the overlap; "
            f"got {extra_left!r} and {extra_right!r}"
        )
    x, y = extra_left[0], extra_right[0]
    if x == y:
        raise VariableCollision(f"both inputs contribute the same fresh variable {x!r}")

    s_order = tuple(v for v in left.vars if v in sset)
    xp = permute_vars(left, (x, *s_order))
    yp = permute_vars(right, (*s_order, y))
    if s_order and marginalize(xp, s_order) != marginalize(yp, s_order):
        raise OverlapMismatch(
            f"inputs disagree on the marginal over {s_order!r}: "
            f"{marginalize(xp, s_order).probs} vs {marginalize(yp, s_order).probs}"
        )

    blocks = 1 << len(s_order)
    box = []
    affine: list[tuple[Fraction, int, int] | None] = [None] * (4 * blocks)
    for o in range(blocks):
        r0 = xp.probs[o]
        r1 = xp.probs[blocks + o]
        c0 = yp.probs[2 * o]
        c1 = yp.probs[2 * o + 1]
        lo = max(ZERO, r0 - c1, c0 - r1)
        hi = min(r0, c0)
        box.append((lo, hi))
        affine[2 * o] = (ZERO, 1, o)                       # Z(0,o,0) = t
        affine[2 * o + 1] = (r0, -1, o)                    # Z(0,o,1)
        affine[2 * blocks + 2 * o] = (c0, -1, o)           # Z(1,o,0)
        affine[2 * blocks + 2 * o + 1] = (r1 - c0, 1, o)   # Z(1,o,1)
    return GlueFamily(
        result_vars=(x, *s_order, y),
        param_coords=tuple(2 * o for o in range(blocks)),
        box=tuple(box),
        affine=tuple(affine),  # type: ignore[arg-type]
    )


def evaluate_family(family: GlueFamily, params: Sequence) -> tuple[Fraction, ...]:
    """Raw affine evaluation of the family at ``params``, without box checks.

    Out-of-box parameters produce vectors with negative entries; that is the
    point of this entry (interval scanning and tightness tests).
    """
    vals = [as_rational(p) for p in params]
    if len(vals) != family.num_params:
        raise LengthMismatch(
            f"family has {family.num_params} parameters, got {len(vals)}"
        )
    return tuple(
        const + vals[param] if sign > 0 else const - vals[param]
        for const, sign, param in family.affine
    )


def reconstruct(family: GlueFamily, params: Sequence) -> JointDist:
    """Build the member of ``family`` selected by ``params``.

    Parameters must lie in the closed box, componentwise. The result is a
    valid joint distribution whose marginals onto both glue inputs match
    them exactly.
    """
    vals = [as_rational(p) for p in params]
    if len(vals) != family.num_params:
        raise LengthMismatch(
            f"family has {family.num_params} parameters, got {len(vals)}"
        )
    for i, (v, (lo, hi)) in enumerate(zip(vals, family.box)):
        if not lo <= v <= hi:
            raise ParamOutOfBox(f"parameter {i} = {v} outside [{lo}, {hi}]")
    return make_joint(family.result_vars, evaluate_family(family, vals))


@dataclass(frozen=True)
class GlueStep:
    """One executed glue: inputs, family, chosen parameters and result."""

    index: int
    left: str
    right: str
    overlap: tuple
    family: GlueFamily
    params: tuple[Fraction, ...]
    result: JointDist


@dataclass(frozen=True)
class GlueSchedule:
    """Ordered glue steps covering a whole tree, plus the final joint.

    ``final`` is presented over the model's sorted vertex order.
    """

    steps: tuple[GlueStep, ...]
    final: JointDist

    @property
    def num_steps(self) -> int:
        return len(self.steps)


class _ScheduleBuilder:
    """Executes the leaf-extension recursion, recording one step per glue."""

    def __init__(self, model: MarginalModel, choices):
        self.model = model
        self.steps: list[GlueStep] = []
        self.policy: str | None = None
        self.explicit: list[Sequence] | None = None
        self.cursor = 0
        self.canon: JointDist | None = None
        if isinstance(choices, str):
            if choices not in POLICIES:
                raise ValueError(f"unknown policy {choices!r}; expected one of {POLICIES}")
            self.policy = choices
            if choices == "canonical":
                self.canon = canonical_joint(model)
        else:
            self.explicit = list(choices)

    def _pick(self, family: GlueFamily) -> tuple[Fraction, ...]:
        if self.explicit is not None:
            if self.cursor >= len(self.explicit):
                raise LengthMismatch(
                    f"schedule has more glue steps than choice lists ({len(self.explicit)})"
                )
            raw = self.explicit[self.cursor]
            self.cursor += 1
            vals = tuple(as_rational(p) for p in raw)
            if len(vals) != family.num_params:
                raise LengthMismatch(
                    f"step {len(self.steps) + 1} needs {family.num_params} parameters, "
                    f"got {len(vals)}"
                )
            return vals
        if self.policy == "canonical":
            assert self.canon is not None
            marg = marginalize(self.canon, family.result_vars)
            return tuple(marg.probs[c] for c in family.param_coords)
        if self.policy == "midpoint":
            return tuple((lo + hi) / 2 for lo, hi in family.box)
        if self.policy == "lower":
            return tuple(lo for lo, _ in family.box)
        return tuple(hi for _, hi in family.box)

    def _glue(self, left: JointDist, ldesc: str, right: JointDist, rdesc: str,
              s_order: tuple) -> tuple[JointDist, str]:
        family = glue_pair(left, right, s_order)
        params = self._pick(family)
        result = reconstruct(family, params)
        step = GlueStep(
            index=len(self.steps) + 1,
            left=ldesc,
            right=rdesc,
            overlap=family.result_vars[1:-1],
            family=family,
            params=params,
            result=result,
        )
        self.steps.append(step)
        return result, f"step {step.index}"

    def _extend(self, joint: JointDist, jdesc: str, parent, new) -> tuple[JointDist, str]:
        if joint.num_vars == 1:
            return self.model.edge_dist(parent, new), f"edge ({parent}, {new})"
        uset = set(joint.vars)
        eligible = sorted(
            v
            for v in joint.vars
            if v != parent
            and sum(1 for nb in self.model.graph.neighbors(v) if nb in uset) == 1
        )
        w = eligible[0]
        s_order = tuple(q for q in joint.vars if q != w)
        sub = marginalize(joint, s_order)
        sdesc = f"marginal of {jdesc} onto ({', '.join(map(repr, s_order))})"
        ext, edesc = self._extend(sub, sdesc, parent, new)
        return self._glue(joint, jdesc, ext, edesc, s_order)

    def run(self, order: Sequence) -> GlueSchedule:
        u0, u1 = order[0], order[1]
        joint = self.model.edge_dist(u0, u1)
        desc = f"edge ({u0}, {u1})"
        covered = {u0, u1}
        for v in order[2:]:
            parents = [nb for nb in self.model.graph.neighbors(v) if nb in covered]
            assert len(parents) == 1, "vertex order must grow a connected subtree"
            joint, desc = self._extend(joint, desc, parents[0], v)
            covered.add(v)
        if self.explicit is not None and self.cursor != len(self.explicit):
            raise LengthMismatch(
                f"{len(self.explicit)} choice lists given but the schedule has "
                f"{self.cursor} glue steps"
            )
        final = permute_vars(joint, self.model.graph.vertices)
        return GlueSchedule(tuple(self.steps), final)


def _require_consistent(model: MarginalModel) -> None:
    report = check_consistency(model)
    if not report.ok:
        raise InconsistentModel(
            f"model is inconsistent ({len(report.violations)} vertex-marginal "
            f"violations); first: {report.violations[0][0]}"
        )


def chain_schedule(model: MarginalModel, choices="canonical") -> GlueSchedule:
    """Schedule for a path graph, extending from the smaller-labeled endpoint.

    A path of n+1 vertices produces glue steps whose final family has
    ``2**(n-1)`` parameters; a 2-vertex path degenerates to the bare edge
    distribution with no steps.
    """
    graph = model.graph
    if any(graph.degree(v) > 2 for v in graph.vertices):
        raise NotAPath(f"graph {graph.edges!r} is not a path")
    _require_consistent(model)
    endpoints = [v for v in graph.vertices if graph.degree(v) == 1]
    start = min(endpoints)
    order = [start]
    prev = None
    while len(order) < len(graph.vertices):
        nxt = [nb for nb in graph.neighbors(order[-1]) if nb != prev]
        prev = order[-1]
        order.append(nxt[0])
    return _ScheduleBuilder(model, choices).run(order)


def star_schedule(model: MarginalModel, choices="canonical") -> GlueSchedule:
    """Schedule for a star graph: center first, then leaves in sorted order.

    Each added leaf glues the joint built so far (dropping the smallest
    other leaf) with a recursively extended marginal; a 2-leaf star is the
    same single glue a 3-vertex chain produces.
    """
    graph = model.graph
    n = len(graph.vertices)
    centers = [v for v in graph.vertices if graph.degree(v) == n - 1]
    if not centers:
        raise NotAStar(f"graph {graph.edges!r} is not a star")
    _require_consistent(model)
    center = min(centers)
    order = [center] + [v for v in graph.vertices if v != center]
    return _ScheduleBuilder(model, choices).run(order)


def tree_schedule(model: MarginalModel, choices="canonical") -> tuple[GlueSchedule, JointDist]:
    """Schedule for an arbitrary tree; returns (schedule, final joint).

    Vertices are added greedily by smallest label among those adjacent to
    the already covered subtree, starting from the smallest label overall.
    ``choices`` is a policy name or one parameter list per glue step; with
    the "canonical" policy the final joint equals :func:`canonical_joint`.
    """
    _require_consistent(model)
    graph = model.graph
    if len(graph.vertices) < 2:
        raise NotAPath("a schedule needs at least two vertices")
    order = [min(graph.vertices)]
    covered = {order[0]}
    while len(order) < len(graph.vertices):
        frontier = sorted(
            v for v in graph.vertices
            if v not in covered and any(nb in covered for nb in graph.neighbors(v))
        )
        order.append(frontier[0])
        covered.add(frontier[0])
    schedule = _ScheduleBuilder(model, choices).run(order)
    return schedule, schedule.final
