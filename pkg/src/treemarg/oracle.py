"""Independent exact verification of families, boxes and reconstructions.

This module deliberately shares no solution machinery with the glue
construction. It assembles the raw linear system over the full joint vector
(one unknown per outcome, one equation per edge entry plus normalization)
and decides feasibility of {A z = b, z >= 0} by an exact rational phase-1
simplex with Bland's rule. A returned witness is re-substituted into every
equation before being handed back, so agreement with the constructive side
is evidence rather than tautology.

Interval scanning drives a glue family's affine reconstruction over a grid
and keeps the grid points whose vectors are nonnegative; since each family
is a product of closed intervals, the scan brackets the analytic box from
the inside.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .canonical import canonical_params
from .errors import ResolutionZero, TooLarge, TreeMarginalError, UnknownLabel
from .gluing import GlueFamily, evaluate_family
from .model import MarginalModel, ProbReport
from .prob import JointDist, as_rational, marginalize

ZERO = Fraction(0)
ONE = Fraction(1)

#: Default cap on model size for exact dense solving (2**12 unknowns).
DEFAULT_MAX_VERTICES = 12


@dataclass(frozen=True)
class LinearSystem:
    """Equality constraints A z = b over the full-outcome vector z >= 0.

    ``vars`` fixes the outcome indexing (sorted model vertices, MSB first).
    ``rows`` holds (coefficients, rhs) pairs; ``labels`` a human-readable
    description per row. Redundant rows are retained on purpose.
    """

    vars: tuple
    rows: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    labels: tuple[str, ...]

    @property
    def num_unknowns(self) -> int:
        return 1 << len(self.vars)


def assemble_system(model: MarginalModel, max_vertices: int = DEFAULT_MAX_VERTICES) -> LinearSystem:
    """One equation per (edge, edge outcome) pair plus normalization."""
    order = model.graph.vertices
    k = len(order)
    if k > max_vertices:
        raise TooLarge(f"{k} vertices exceed the cap of {max_vertices}")
    pos = {v: i for i, v in enumerate(order)}
    n = 1 << k
    rows = []
    labels = []
    for u, v in model.graph.edges:
        dist = model.edge_dist(u, v)
        su, sv = k - 1 - pos[u], k - 1 - pos[v]
        for a in (0, 1):
            for b in (0, 1):
                coeffs = tuple(
                    ONE if ((i >> su) & 1) == a and ((i >> sv) & 1) == b else ZERO
                    for i in range(n)
                )
                rows.append((coeffs, dist.probs[(a << 1) | b]))
                labels.append(f"edge ({u!r},{v!r}) outcome ({a},{b})")
    rows.append((tuple(ONE for _ in range(n)), ONE))
    labels.append("normalization")
    return LinearSystem(order, tuple(rows), tuple(labels))


def _pivot(tab, obj, basis, r, c):
    piv = tab[r][c]
    row = [v / piv for v in tab[r]]
    tab[r] = row
    for i in range(len(tab)):
        if i != r and tab[i][c]:
            f = tab[i][c]
            tab[i] = [a - f * b for a, b in zip(tab[i], row)]
    if obj[c]:
        f = obj[c]
        obj[:] = [a - f * b for a, b in zip(obj, row)]
    basis[r] = c


def _phase1_simplex(rows: Sequence[tuple[Sequence[Fraction], Fraction]], n: int):
    """Exact phase-1: minimize the sum of artificials, Bland's rule.

    Returns a nonnegative solution of A z = b or None if none exists.
    """
    m = len(rows)
    if m == 0:
        return [ZERO] * n
    tab = []
    for coeffs, rhs in rows:
        cs = list(coeffs)
        if rhs < 0:
            cs = [-c for c in cs]
            rhs = -rhs
        tab.append(cs + [ZERO] * m + [rhs])
    for i in range(m):
        tab[i][n + i] = ONE
    width = n + m + 1
    basis = list(range(n, n + m))
    # Phase-1 reduced costs with the all-artificial starting basis.
    obj = []
    for j in range(width):
        col_sum = sum(tab[i][j] for i in range(m))
        cost = ONE if n <= j < n + m else ZERO
        obj.append(cost - col_sum)

    while True:
        enter = -1
        for j in range(n):  # artificials never re-enter
            if obj[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][width - 1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:  # impossible: the phase-1 objective is bounded below
            raise TreeMarginalError("phase-1 simplex met an unbounded direction")
        _pivot(tab, obj, basis, leave, enter)

    if -obj[width - 1] != 0:
        return None
    x = [ZERO] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = tab[i][width - 1]
    return x


def feasible(system: LinearSystem):
    """An exact nonnegative solution of the system, or None if infeasible.

    The witness is independently re-checked by substitution into every row
    before being returned; exact equality is required on each.
    """
    witness = _phase1_simplex(system.rows, system.num_unknowns)
    if witness is None:
        return None
    for (coeffs, rhs), label in zip(system.rows, system.labels):
        acc = ZERO
        for c, x in zip(coeffs, witness):
            if c:
                acc += c * x
        if acc != rhs:
            raise TreeMarginalError(f"witness fails substitution on row {label!r}")
    if any(x < 0 for x in witness):
        raise TreeMarginalError("witness has a negative entry")
    return tuple(witness)


def verify_joint(joint: JointDist, model: MarginalModel) -> ProbReport:
    """Check that ``joint`` reproduces every edge distribution exactly.

    Also re-checks normalization and nonnegativity. Never raises for value
    mismatches; all violations are reported with both sides.
    """
    missing = [v for v in model.graph.vertices if v not in joint.vars]
    if missing:
        raise UnknownLabel(f"joint lacks model variables {missing!r}")
    violations = []
    total = sum(joint.probs)
    if total != 1:
        violations.append(("total probability", total, ONE))
    for i, p in enumerate(joint.probs):
        if p < 0:
            violations.append((f"entry {i} nonnegative", p, ZERO))
    for u, v in model.graph.edges:
        got = marginalize(joint, (u, v))
        want = model.edge_dist(u, v)
        for idx in range(4):
            if got.probs[idx] != want.probs[idx]:
                a, b = idx >> 1, idx & 1
                violations.append(
                    (
                        f"edge ({u!r},{v!r}) outcome ({a},{b})",
                        got.probs[idx],
                        want.probs[idx],
                    )
                )
    return ProbReport(tuple(violations))


def scan_interval(
    family: GlueFamily,
    coord: int,
    resolution: int,
    fixed="canonical",
    *,
    model: MarginalModel | None = None,
):
    """Brute-force scan of one parameter coordinate over a [0, 1] grid.

    The grid is {t / resolution : t = 0..resolution}. All other parameters
    are held at ``fixed``: the name of a policy ("canonical" needs ``model``,
    "midpoint"/"lower"/"upper" use the box) or an explicit parameter
    sequence. Returns the (min, max) grid values whose reconstruction is
    nonnegative, or None when no grid point is feasible. Because each family
    is a product of intervals, the result always lies inside the analytic
    box and misses no feasible grid point.
    """
    if not isinstance(resolution, int) or resolution < 1:
        raise ResolutionZero(f"resolution must be a positive integer, got {resolution!r}")
    if not 0 <= coord < family.num_params:
        raise ValueError(f"coordinate {coord} out of range for {family.num_params} parameters")
    if isinstance(fixed, str):
        if fixed == "canonical":
            if model is None:
                raise ValueError("fixed='canonical' requires the model")
            base = list(canonical_params(model, family))
        elif fixed == "midpoint":
            base = [(lo + hi) / 2 for lo, hi in family.box]
        elif fixed == "lower":
            base = [lo for lo, _ in family.box]
        elif fixed == "upper":
            base = [hi for _, hi in family.box]
        else:
            raise ValueError(f"unknown policy {fixed!r}")
    else:
        base = [as_rational(p) for p in fixed]
        if len(base) != family.num_params:
            raise ValueError(
                f"fixed parameters must have length {family.num_params}, got {len(base)}"
            )
    low = high = None
    for t in range(resolution + 1):
        g = Fraction(t, resolution)
        base[coord] = g
        if all(e >= 0 for e in evaluate_family(family, base)):
            if low is None:
                low = g
            high = g
    if low is None:
        return None
    return (low, high)
