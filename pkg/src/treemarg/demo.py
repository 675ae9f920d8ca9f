"""Self-checking walkthrough of the bundled four-variable star example.

The example model is a star with center 0 and leaves 1, 2, 3 whose three
edge distributions share the center marginal (9/20, 11/20). The walkthrough
executes the star schedule with fixed parameter choices, prints every
intermediate (step boxes, step results, their reordered presentations and
the final 16-entry joint) and compares each against frozen expected values.
It then cross-checks the final joint against the model's edge marginals,
the independent feasibility solver, and the product-formula joint (which
must differ, demonstrating non-uniqueness).
"""

from __future__ import annotations

from fractions import Fraction

from .canonical import canonical_joint
from .gluing import star_schedule
from .instance_io import format_vector
from .model import MarginalModel, build_model, build_tree, check_consistency, vertex_marginal
from .oracle import assemble_system, feasible, verify_joint
from .prob import JointDist, make_joint, permute_vars

F = Fraction

STAR_EDGE_DISTS = {
    (0, 1): ("1/5", "1/4", "2/5", "3/20"),
    (0, 2): ("1/5", "1/4", "7/20", "1/5"),
    (0, 3): ("1/5", "1/4", "1/4", "3/10"),
}

#: Parameter choices driving the example schedule, one list per glue step.
EXAMPLE_CHOICES = (
    ("1/10", "1/5"),
    ("3/20", "1/10"),
    ("1/20", "0", "1/20", "3/20"),
)

EXPECTED_BOXES = (
    (("0", "1/5"), ("1/5", "7/20")),
    (("0", "1/5"), ("1/20", "1/4")),
    (("1/20", "1/10"), ("0", "1/20"), ("0", "1/10"), ("3/20", "3/20")),
)

EXPECTED_STEP_VARS = ((1, 0, 2), (2, 0, 3), (1, 0, 2, 3))

EXPECTED_STEP_PROBS = (
    ("1/10", "1/10", "1/5", "1/5", "1/10", "3/20", "3/20", "0"),
    ("3/20", "1/20", "1/10", "1/4", "1/20", "1/5", "3/20", "1/20"),
    None,  # the final step is checked through the sorted presentation below
)

#: Step results re-presented with the center variable first.
EXPECTED_REORDERED = {
    (0, 1, 2): ("1/10", "1/10", "1/10", "3/20", "1/5", "1/5", "3/20", "0"),
    (0, 2, 3): ("3/20", "1/20", "1/20", "1/5", "1/10", "1/4", "3/20", "1/20"),
}

EXPECTED_FINAL = (
    "1/20", "1/20", "0", "1/10", "1/10", "0", "1/20", "1/10",
    "1/20", "3/20", "3/20", "1/20", "1/20", "1/10", "0", "0",
)


def star_example_model() -> MarginalModel:
    """The bundled star: center 0, leaves 1..3, shared marginal (9/20, 11/20)."""
    tree = build_tree((0, 1, 2, 3), tuple(STAR_EDGE_DISTS))
    return build_model(tree, STAR_EDGE_DISTS)


def chain_example_model() -> MarginalModel:
    """The bundled 3-chain 1 - 0 - 2 (two of the star's edges)."""
    tree = build_tree((0, 1, 2), ((0, 1), (0, 2)))
    return build_model(
        tree,
        {(0, 1): STAR_EDGE_DISTS[(0, 1)], (0, 2): STAR_EDGE_DISTS[(0, 2)]},
    )


def _boxes_of(step) -> tuple:
    return tuple((str(lo), str(hi)) for lo, hi in step.family.box)


def _box_text(box) -> str:
    return " x ".join(f"[{lo}, {hi}]" for lo, hi in box)


def run_demo(out=print) -> bool:
    """Run the walkthrough, printing every intermediate; True iff all checks pass."""
    ok = True

    def check(label: str, got, want) -> str:
        nonlocal ok
        if got == want:
            return f"{label}   ... ok"
        ok = False
        return f"{label}   ... MISMATCH (expected {want!r}, got {got!r})"

    model = star_example_model()
    out("bundled example: star on vertices (0, 1, 2, 3) with center 0")
    out("input edge distributions:")
    for (u, v), probs in STAR_EDGE_DISTS.items():
        out(f"  p({u},{v}) = {format_vector(map(F, probs))}")
    report = check_consistency(model)
    out(check("consistency check", report.ok, True))
    out(f"shared center marginal p(0) = {format_vector(vertex_marginal(model, 0).probs)}")
    out("")

    schedule = star_schedule(model, EXAMPLE_CHOICES)
    for step, expected_box, expected_vars, expected_probs in zip(
        schedule.steps, EXPECTED_BOXES, EXPECTED_STEP_VARS, EXPECTED_STEP_PROBS
    ):
        out(f"step {step.index}: glue [{step.left}] with [{step.right}] "
            f"over {step.overlap}")
        out(check(f"  parameter intervals: {_box_text(step.family.box)}",
                  _boxes_of(step), expected_box))
        out(f"  chosen parameters: {format_vector(step.params)}")
        line = f"  result over {step.result.vars}: {format_vector(step.result.probs)}"
        if expected_probs is None:
            out(check(line, step.result.vars, expected_vars))
        else:
            out(check(line, (step.result.vars, step.result.probs),
                      (expected_vars, make_joint(expected_vars, expected_probs).probs)))
        reordered = tuple(sorted(step.result.vars))
        if reordered in EXPECTED_REORDERED:
            view = permute_vars(step.result, reordered)
            out(check(
                f"  reordered to {reordered}: {format_vector(view.probs)}",
                view.probs,
                make_joint(reordered, EXPECTED_REORDERED[reordered]).probs,
            ))
    out("")

    final = schedule.final
    expected_final = make_joint((0, 1, 2, 3), EXPECTED_FINAL)
    out(check(
        f"final joint over {final.vars}: {format_vector(final.probs)}",
        final, expected_final,
    ))
    out(check("edge marginals reproduced exactly", verify_joint(final, model).ok, True))

    witness = feasible(assemble_system(model))
    witness_ok = witness is not None and verify_joint(
        JointDist(model.graph.vertices, witness), model
    ).ok
    out(check("independent feasibility check", witness_ok, True))

    product_joint = canonical_joint(model)
    out(check(
        f"product-formula joint differs at outcome 0000: "
        f"{product_joint.probs[0]} vs {final.probs[0]}",
        product_joint.probs[0] != final.probs[0],
        True,
    ))

    out("")
    out("demo: all checks passed" if ok else "demo: CHECKS FAILED")
    return ok
