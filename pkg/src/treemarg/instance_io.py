"""Instance, joint and choices file formats (JSON with exact rationals).

All numeric values in files are rational strings such as ``"3/20"`` or
``"0"``; floats are never written or accepted. Variable labels are JSON
strings or integers, homogeneous per file. An edge's ``dist`` lists the four
probabilities over the edge's written order (u, v), MSB first:
(u=0,v=0), (u=0,v=1), (u=1,v=0), (u=1,v=1).

Instance example::

    {
      "format": "tree-marginal-instance",
      "version": 1,
      "variables": [0, 1, 2],
      "edges": [
        {"u": 0, "v": 1, "dist": ["1/5", "1/4", "2/5", "3/20"]},
        {"u": 0, "v": 2, "dist": ["1/5", "1/4", "7/20", "1/5"]}
      ]
    }

Joint files carry ``vars`` and ``probs`` the same way; choices files carry
``steps``, one parameter list per glue step in schedule order.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import InstanceSemanticError, InstanceSyntaxError, TreeMarginalError
from .model import MarginalModel, build_model, build_tree
from .prob import JointDist, make_joint, rational_format, rational_parse

INSTANCE_FORMAT = "tree-marginal-instance"
JOINT_FORMAT = "tree-marginal-joint"
CHOICES_FORMAT = "tree-marginal-choices"
FORMAT_VERSION = 1


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None


def _check_header(data, expected_format: str) -> None:
    if not isinstance(data, dict):
        raise InstanceSemanticError("top level must be a JSON object")
    fmt = data.get("format")
    if fmt != expected_format:
        raise InstanceSemanticError(f"format: expected {expected_format!r}, got {fmt!r}")
    version = data.get("version")
    if version != FORMAT_VERSION:
        raise InstanceSemanticError(f"version: expected {FORMAT_VERSION}, got {version!r}")


def _valid_label(value) -> bool:
    return (isinstance(value, str) and value) or (
        isinstance(value, int) and not isinstance(value, bool)
    )


def _parse_rationals(raw, path: str, count: int) -> list[Fraction]:
    if not isinstance(raw, list) or len(raw) != count:
        raise InstanceSemanticError(f"{path}: expected a list of {count} rational strings")
    out = []
    for j, item in enumerate(raw):
        if not isinstance(item, str):
            raise InstanceSemanticError(f"{path}[{j}]: rationals must be strings, got {item!r}")
        try:
            out.append(rational_parse(item))
        except TreeMarginalError as exc:
            raise InstanceSemanticError(f"{path}[{j}]: {exc}") from None
    return out


def _parse_labels(raw, path: str) -> list:
    if not isinstance(raw, list) or not raw:
        raise InstanceSemanticError(f"{path}: expected a nonempty list of labels")
    for i, lab in enumerate(raw):
        if not _valid_label(lab):
            raise InstanceSemanticError(f"{path}[{i}]: labels must be nonempty strings or integers")
    kinds = {type(lab) for lab in raw}
    if len(kinds) > 1:
        raise InstanceSemanticError(f"{path}: labels must be all strings or all integers")
    return list(raw)


def parse_instance(text: str) -> MarginalModel:
    """Parse and fully validate an instance file into a model.

    Tree-structure checks and per-edge normalization run here; vertex
    marginal consistency does not (use ``check_consistency`` for that).
    Errors carry a line/column (syntax) or field path (semantics).
    """
    data = _load_json(text)
    _check_header(data, INSTANCE_FORMAT)
    variables = _parse_labels(data.get("variables"), "variables")
    vset = set(variables)
    if len(vset) != len(variables):
        raise InstanceSemanticError("variables: duplicate labels")

    edges_raw = data.get("edges")
    if not isinstance(edges_raw, list) or not edges_raw:
        raise InstanceSemanticError("edges: expected a nonempty list")
    pairs = []
    dists = {}
    for i, entry in enumerate(edges_raw):
        path = f"edges[{i}]"
        if not isinstance(entry, dict):
            raise InstanceSemanticError(f"{path}: expected an object")
        u, v = entry.get("u"), entry.get("v")
        for name, lab in (("u", u), ("v", v)):
            if lab not in vset:
                raise InstanceSemanticError(f"{path}.{name}: unknown variable {lab!r}")
        values = _parse_rationals(entry.get("dist"), f"{path}.dist", 4)
        try:
            dist = make_joint((u, v), values)
        except TreeMarginalError as exc:
            raise InstanceSemanticError(f"{path}.dist: {exc}") from None
        pairs.append((u, v))
        if frozenset((u, v)) in {frozenset(p) for p in pairs[:-1]}:
            raise InstanceSemanticError(f"{path}: duplicate edge ({u!r},{v!r})")
        dists[(u, v)] = dist
    try:
        tree = build_tree(variables, pairs)
        return build_model(tree, dists)
    except TreeMarginalError as exc:
        raise InstanceSemanticError(f"edges: {exc}") from None


def format_instance(model: MarginalModel) -> str:
    """Serialize a model; ``parse_instance`` inverts this exactly."""
    edges = []
    for u, v in model.graph.edges:
        dist = model.edge_dist(u, v)
        edges.append({"u": u, "v": v, "dist": [rational_format(p) for p in dist.probs]})
    doc = {
        "format": INSTANCE_FORMAT,
        "version": FORMAT_VERSION,
        "variables": list(model.graph.vertices),
        "edges": edges,
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_joint(text: str) -> JointDist:
    """Parse a joint-distribution file (as written by ``format_joint``)."""
    data = _load_json(text)
    _check_header(data, JOINT_FORMAT)
    labels = _parse_labels(data.get("vars"), "vars")
    values = _parse_rationals(data.get("probs"), "probs", 1 << len(labels))
    try:
        return make_joint(labels, values)
    except TreeMarginalError as exc:
        raise InstanceSemanticError(f"probs: {exc}") from None


def format_joint(joint: JointDist, command: str | None = None) -> str:
    doc = {
        "format": JOINT_FORMAT,
        "version": FORMAT_VERSION,
        "vars": list(joint.vars),
        "probs": [rational_format(p) for p in joint.probs],
    }
    if command is not None:
        doc["command"] = command
    return json.dumps(doc, indent=2) + "\n"


def parse_choices(text: str) -> list[list[Fraction]]:
    """Parse per-step parameter choices, one rational list per glue step."""
    data = _load_json(text)
    _check_header(data, CHOICES_FORMAT)
    steps_raw = data.get("steps")
    if not isinstance(steps_raw, list):
        raise InstanceSemanticError("steps: expected a list of parameter lists")
    steps = []
    for i, raw in enumerate(steps_raw):
        if not isinstance(raw, list):
            raise InstanceSemanticError(f"steps[{i}]: expected a list of rational strings")
        steps.append(_parse_rationals(raw, f"steps[{i}]", len(raw)))
    return steps


def format_choices(steps) -> str:
    doc = {
        "format": CHOICES_FORMAT,
        "version": FORMAT_VERSION,
        "steps": [[rational_format(Fraction(p)) for p in step] for step in steps],
    }
    return json.dumps(doc, indent=2) + "\n"


def format_vector(probs) -> str:
    """Render a probability vector as ``(a, b, ...)`` with exact rationals."""
    return "(" + ", ".join(rational_format(p) for p in probs) + ")"
