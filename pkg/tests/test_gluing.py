"""Glue families, boxes, reconstruction, and whole-tree schedules."""

import random
from fractions import Fraction

import pytest

from treemarg import (
    build_model,
    build_tree,
    canonical_joint,
    canonical_params,
    chain_schedule,
    evaluate_family,
    glue_pair,
    make_joint,
    marginalize,
    permute_vars,
    reconstruct,
    star_schedule,
    tree_schedule,
    verify_joint,
)
from treemarg.demo import EXAMPLE_CHOICES, chain_example_model, star_example_model
from treemarg.errors import (
    InconsistentModel,
    LengthMismatch,
    NotAPath,
    NotAStar,
    OverlapMismatch,
    ParamOutOfBox,
    UnknownLabel,
    VariableCollision,
)

from _support import frs, random_consistent_model

F = Fraction

STEP1_RESULT = frs("1/10", "1/10", "1/5", "1/5", "1/10", "3/20", "3/20", "0")
STEP2_RESULT = frs("3/20", "1/20", "1/10", "1/4", "1/20", "1/5", "3/20", "1/20")
FINAL_RESULT = frs(
    "1/20", "1/20", "0", "1/10", "1/10", "0", "1/20", "1/10",
    "1/20", "3/20", "3/20", "1/20", "1/20", "1/10", "0", "0",
)


def _star_left_right():
    x3 = make_joint((0, 1, 2), ("1/10", "1/10", "1/10", "3/20", "1/5", "1/5", "3/20", "0"))
    x1 = make_joint((0, 2, 3), ("3/20", "1/20", "1/20", "1/5", "1/10", "1/4", "3/20", "1/20"))
    return x3, x1


# --- glue_pair ----------------------------------------------------------------

def test_three_chain_box():
    model = chain_example_model()
    family = glue_pair(model.edge_dist(1, 0), model.edge_dist(0, 2), (0,))
    assert family.result_vars == (1, 0, 2)
    assert family.param_coords == (0, 2)
    assert family.box == ((F(0), F(1, 5)), (F(1, 5), F(7, 20)))


def test_glue_reorders_inputs_internally():
    # Feeding the same data in the opposite stored orientation changes nothing.
    model = chain_example_model()
    family = glue_pair(model.edge_dist(0, 1), model.edge_dist(2, 0), (0,))
    assert family.result_vars == (1, 0, 2)
    assert family.box == ((F(0), F(1, 5)), (F(1, 5), F(7, 20)))


def test_star_final_box():
    x3, x1 = _star_left_right()
    family = glue_pair(x3, x1, (0, 2))
    assert family.result_vars == (1, 0, 2, 3)
    assert family.param_coords == (0, 2, 4, 6)
    assert family.box == (
        (F(1, 20), F(1, 10)),
        (F(0), F(1, 20)),
        (F(0), F(1, 10)),
        (F(3, 20), F(3, 20)),
    )


def test_point_mass_glue_has_singleton_boxes():
    point = make_joint(("a", "b"), ("0", "1", "0", "0"))
    other = make_joint(("b", "c"), ("0", "0", "1", "0"))
    family = glue_pair(point, other, ("b",))
    assert family.box == ((F(0), F(0)), (F(1), F(1)))
    joint = reconstruct(family, [lo for lo, _ in family.box])
    assert joint.probs == (F(0), F(0), F(0), F(1), F(0), F(0), F(0), F(0))


def test_glue_empty_overlap_is_frechet_box():
    a = make_joint(("a",), ("1/3", "2/3"))
    b = make_joint(("b",), ("1/2", "1/2"))
    family = glue_pair(a, b, ())
    assert family.box == ((F(0), F(1, 3)),)
    joint = reconstruct(family, (F(1, 6),))  # independent coupling
    assert joint.probs == (F(1, 6), F(1, 6), F(1, 3), F(1, 3))


def test_glue_rejects_overlap_mismatch():
    left = make_joint(("a", "b"), ("1/2", "0", "0", "1/2"))
    right = make_joint(("b", "c"), ("1/4", "1/4", "1/4", "1/4"))
    with pytest.raises(OverlapMismatch):
        glue_pair(left, right, ("b",))


def test_glue_rejects_variable_collision():
    left = make_joint(("a", "b"), ("1/4", "1/4", "1/4", "1/4"))
    with pytest.raises(VariableCollision):
        glue_pair(left, left, ("b",))
    wide = make_joint(("a", "b", "c"), [F(1, 8)] * 8)
    with pytest.raises(VariableCollision):
        glue_pair(wide, left, ("b",))
    with pytest.raises(UnknownLabel):
        glue_pair(left, make_joint(("b", "c"), ("1/2", "0", "1/4", "1/4")), ("z",))


# --- reconstruct ----------------------------------------------------------------

def test_reconstruct_step1_fixture():
    model = star_example_model()
    family = glue_pair(model.edge_dist(1, 0), model.edge_dist(0, 2), (0,))
    joint = reconstruct(family, ("1/10", "1/5"))
    assert joint.vars == (1, 0, 2)
    assert joint.probs == STEP1_RESULT


def test_reconstruct_step2_fixture():
    model = star_example_model()
    family = glue_pair(model.edge_dist(2, 0), model.edge_dist(0, 3), (0,))
    assert family.box == ((F(0), F(1, 5)), (F(1, 20), F(1, 4)))
    joint = reconstruct(family, ("3/20", "1/10"))
    assert joint.vars == (2, 0, 3)
    assert joint.probs == STEP2_RESULT


def test_reconstruct_final_fixture():
    x3, x1 = _star_left_right()
    family = glue_pair(x3, x1, (0, 2))
    joint = permute_vars(reconstruct(family, ("1/20", "0", "1/20", "3/20")), (0, 1, 2, 3))
    assert joint.probs == FINAL_RESULT


def test_reconstruct_rejects_out_of_box_and_bad_length():
    model = chain_example_model()
    family = glue_pair(model.edge_dist(1, 0), model.edge_dist(0, 2), (0,))
    with pytest.raises(ParamOutOfBox):
        reconstruct(family, ("1/10", "1/10"))  # second coordinate below 1/5
    with pytest.raises(LengthMismatch):
        reconstruct(family, ("1/10",))


def test_reconstruct_marginals_match_inputs_exactly():
    rng = random.Random(31)
    for _ in range(15):
        model, joint = random_consistent_model(rng, 4)
        vs = model.graph.vertices
        left = marginalize(joint, vs[:3])
        right = marginalize(joint, vs[1:])
        family = glue_pair(left, right, vs[1:3])
        corners = [
            [lo for lo, _ in family.box],
            [hi for _, hi in family.box],
            [(lo + hi) / 2 for lo, hi in family.box],
        ]
        for params in corners:
            rec = reconstruct(family, params)
            assert marginalize(rec, left.vars) == left
            assert marginalize(rec, right.vars) == right


def test_box_corners_touch_zero_and_outside_is_negative():
    rng = random.Random(47)
    eps = F(1, 997)
    for _ in range(15):
        model, joint = random_consistent_model(rng, 3)
        vs = model.graph.vertices
        left = marginalize(joint, vs[:2])
        right = marginalize(joint, vs[1:])
        family = glue_pair(left, right, (vs[1],))
        mid = [(lo + hi) / 2 for lo, hi in family.box]
        for i, (lo, hi) in enumerate(family.box):
            for corner in (lo, hi):
                params = list(mid)
                params[i] = corner
                entries = evaluate_family(family, params)
                assert min(entries) >= 0
                if lo != hi or corner == 0:
                    block = [e for j, e in enumerate(entries)
                             if family.affine[j][2] == i]
                    assert 0 in block or lo == hi
            params = list(mid)
            params[i] = lo - eps
            assert min(evaluate_family(family, params)) < 0
            params[i] = hi + eps
            assert min(evaluate_family(family, params)) < 0


def test_box_is_never_empty_on_consistent_inputs():
    rng = random.Random(53)
    for _ in range(40):
        n = rng.randint(2, 4)
        model, joint = random_consistent_model(rng, n + 1)
        vs = model.graph.vertices
        left = marginalize(joint, vs[:n])
        right = marginalize(joint, vs[1:])
        family = glue_pair(left, right, vs[1:n])
        assert all(lo <= hi for lo, hi in family.box)
        assert family.num_params == 1 << (n - 1)


# --- schedules -------------------------------------------------------------------

def test_star_schedule_with_explicit_choices_reproduces_fixtures():
    schedule = star_schedule(star_example_model(), EXAMPLE_CHOICES)
    assert schedule.num_steps == 3
    s1, s2, s3 = schedule.steps
    assert (s1.left, s1.right) == ("edge (0, 1)", "edge (0, 2)")
    assert s1.result.vars == (1, 0, 2) and s1.result.probs == STEP1_RESULT
    assert (s2.left, s2.right) == ("marginal of step 1 onto (0, 2)", "edge (0, 3)")
    assert s2.result.vars == (2, 0, 3) and s2.result.probs == STEP2_RESULT
    assert (s3.left, s3.right) == ("step 1", "step 2")
    assert s3.family.box[3] == (F(3, 20), F(3, 20))
    assert schedule.final.vars == (0, 1, 2, 3)
    assert schedule.final.probs == FINAL_RESULT


def test_tree_schedule_matches_star_schedule_here():
    model = star_example_model()
    schedule, final = tree_schedule(model, EXAMPLE_CHOICES)
    assert final == star_schedule(model, EXAMPLE_CHOICES).final
    assert final.probs == FINAL_RESULT


def test_chain_schedule_three_vertices_single_step():
    schedule = chain_schedule(chain_example_model(), "canonical")
    assert schedule.num_steps == 1
    step = schedule.steps[0]
    assert step.family.num_params == 2
    assert step.family.box == ((F(0), F(1, 5)), (F(1, 5), F(7, 20)))
    assert step.params == (F(4, 45), F(14, 55))
    assert schedule.final == canonical_joint(chain_example_model())


def test_two_vertex_schedule_is_the_edge_itself():
    tree = build_tree((0, 1), ((0, 1),))
    model = build_model(tree, {(0, 1): ("1/5", "1/4", "2/5", "3/20")})
    for schedule in (
        chain_schedule(model, "canonical"),
        star_schedule(model, "canonical"),
        tree_schedule(model, [])[0],
    ):
        assert schedule.num_steps == 0
        assert schedule.final == model.edge_dist(0, 1)


def test_four_chain_schedule_structure_and_marginals():
    rng = random.Random(61)
    for _ in range(10):
        labels = (0, 1, 2, 3)
        edges = ((0, 1), (1, 2), (2, 3))
        joint = make_joint(labels, _vec(rng, 16))
        model = build_model(
            build_tree(labels, edges), {e: marginalize(joint, e) for e in edges}
        )
        schedule = chain_schedule(model, "midpoint")
        assert schedule.num_steps == 3          # two nesting levels of glue
        assert schedule.steps[-1].family.num_params == 4
        assert verify_joint(schedule.final, model).ok


def test_star_schedules_reproduce_marginals_for_any_policy():
    rng = random.Random(67)
    for n_leaves in (2, 3, 4):
        labels = tuple(range(n_leaves + 1))
        edges = tuple((0, leaf) for leaf in labels[1:])
        joint = make_joint(labels, _vec(rng, 1 << len(labels)))
        model = build_model(
            build_tree(labels, edges), {e: marginalize(joint, e) for e in edges}
        )
        for policy in ("canonical", "midpoint", "lower", "upper"):
            schedule = star_schedule(model, policy)
            assert verify_joint(schedule.final, model).ok


def test_two_leaf_star_equals_chain_schedule():
    model = chain_example_model()  # path 1 - 0 - 2 is also a star centered at 0
    chain = chain_schedule(model, "midpoint")
    star = star_schedule(model, "midpoint")
    assert chain.num_steps == star.num_steps == 1
    assert chain.final == star.final


def test_canonical_policy_equals_canonical_joint_on_random_trees():
    rng = random.Random(71)
    for _ in range(25):
        model, _ = random_consistent_model(rng, rng.randint(2, 6))
        _, final = tree_schedule(model, "canonical")
        assert final == canonical_joint(model)


def test_schedule_shape_errors():
    star = star_example_model()
    with pytest.raises(NotAPath):
        chain_schedule(star)
    rng = random.Random(3)
    # a "broom": path 0-1-2 plus leaves 3,4 at vertex 2 is neither path nor star
    labels = (0, 1, 2, 3, 4)
    edges = ((0, 1), (1, 2), (2, 3), (2, 4))
    joint = make_joint(labels, _vec(rng, 32))
    model = build_model(build_tree(labels, edges), {e: marginalize(joint, e) for e in edges})
    with pytest.raises(NotAStar):
        star_schedule(model)
    with pytest.raises(NotAPath):
        chain_schedule(model)
    _, final = tree_schedule(model, "midpoint")
    assert verify_joint(final, model).ok


def test_schedule_rejects_inconsistent_model():
    tree = build_tree((0, 1, 2), ((0, 1), (0, 2)))
    model = build_model(
        tree,
        {(0, 1): ("1/5", "1/4", "2/5", "3/20"), (0, 2): ("1/4", "1/4", "1/4", "1/4")},
    )
    with pytest.raises(InconsistentModel):
        tree_schedule(model, "midpoint")


def test_explicit_choices_validation():
    model = star_example_model()
    with pytest.raises(LengthMismatch):
        star_schedule(model, [("1/10", "1/5")])  # too few lists
    with pytest.raises(LengthMismatch):
        star_schedule(model, list(EXAMPLE_CHOICES) + [("0",)])  # too many
    with pytest.raises(LengthMismatch):
        star_schedule(model, [("1/10",), EXAMPLE_CHOICES[1], EXAMPLE_CHOICES[2]])
    bad = [("1/10", "1/5"), ("3/20", "1/10"), ("1/20", "0", "1/20", "1/10")]
    with pytest.raises(ParamOutOfBox):
        star_schedule(model, bad)  # last parameter must equal 3/20


def _vec(rng, length):
    while True:
        nums = [rng.randint(0, 9) for _ in range(length)]
        if any(nums):
            total = sum(nums)
            return [F(a, total) for a in nums]
