"""Command-line interface.

Exit codes: 0 on success, 1 on validation or verification failure, 2 on
usage or file-parse errors. All numeric output is exact; ``--json`` selects
a machine-readable rendering carrying the same rational strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .canonical import canonical_joint
from .demo import run_demo
from .errors import (
    InstanceSemanticError,
    InstanceSyntaxError,
    TreeMarginalError,
)
from .gluing import GlueSchedule, chain_schedule, star_schedule, tree_schedule
from .instance_io import (
    format_joint,
    format_vector,
    parse_choices,
    parse_instance,
    parse_joint,
)
from .model import MarginalModel, check_consistency, vertex_marginal
from .oracle import assemble_system, feasible, scan_interval, verify_joint
from .prob import outcome_bits, rational_format


def _load_model(path: str) -> MarginalModel:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def _detect_shape(model: MarginalModel) -> str:
    graph = model.graph
    n = len(graph.vertices)
    if all(graph.degree(v) <= 2 for v in graph.vertices):
        return "chain"
    if any(graph.degree(v) == n - 1 for v in graph.vertices):
        return "star"
    return "tree"


def _run_schedule(model: MarginalModel, shape: str, choices) -> tuple[str, GlueSchedule]:
    if shape == "auto":
        shape = _detect_shape(model)
    if shape == "chain":
        return shape, chain_schedule(model, choices)
    if shape == "star":
        return shape, star_schedule(model, choices)
    schedule, _ = tree_schedule(model, choices)
    return "tree", schedule


def _choices_arg(args):
    if getattr(args, "choices", None):
        return parse_choices(Path(args.choices).read_text(encoding="utf-8"))
    return args.policy


def _outcome_label(index: int, width: int) -> str:
    return "".join(str(b) for b in outcome_bits(index, width))


def _print_joint(joint, out) -> None:
    out(f"vars: {' '.join(map(str, joint.vars))}")
    for i, p in enumerate(joint.probs):
        out(f"p({_outcome_label(i, joint.num_vars)}) = {rational_format(p)}")


def _report_json(report) -> dict:
    return {
        "ok": report.ok,
        "violations": [
            {"constraint": desc, "lhs": rational_format(lhs), "rhs": rational_format(rhs)}
            for desc, lhs, rhs in report.violations
        ],
    }


def _steps_json(schedule: GlueSchedule) -> list[dict]:
    docs = []
    for step in schedule.steps:
        docs.append(
            {
                "index": step.index,
                "left": step.left,
                "right": step.right,
                "overlap": [str(v) for v in step.overlap],
                "result_vars": [str(v) for v in step.family.result_vars],
                "params": [
                    {
                        "entry": coord + 1,
                        "interval": [rational_format(lo), rational_format(hi)],
                        "chosen": rational_format(value),
                    }
                    for coord, (lo, hi), value in zip(
                        step.family.param_coords, step.family.box, step.params
                    )
                ],
            }
        )
    return docs


def _print_steps(schedule: GlueSchedule, out) -> None:
    for step in schedule.steps:
        out(f"step {step.index}: glue [{step.left}] with [{step.right}] over {step.overlap}")
        out(f"  result order: {step.family.result_vars}")
        for k, (coord, (lo, hi), value) in enumerate(
            zip(step.family.param_coords, step.family.box, step.params), start=1
        ):
            out(
                f"  parameter {k} (entry {coord + 1}): interval "
                f"[{rational_format(lo)}, {rational_format(hi)}], "
                f"chosen {rational_format(value)}"
            )


def cmd_validate(args) -> int:
    model = _load_model(args.instance)
    report = check_consistency(model)
    if args.json:
        doc = {"command": "validate"} | _report_json(report)
        if report.ok:
            doc["vertex_marginals"] = {
                str(v): [rational_format(p) for p in vertex_marginal(model, v).probs]
                for v in model.graph.vertices
            }
        print(json.dumps(doc, indent=2))
    else:
        print(f"command: validate {args.instance}")
        print(f"consistent: {'yes' if report.ok else 'no'}")
        if report.ok:
            for v in model.graph.vertices:
                print(f"  p({v}) = {format_vector(vertex_marginal(model, v).probs)}")
        else:
            for desc, lhs, rhs in report.violations:
                print(f"  {desc}: {rational_format(lhs)} != {rational_format(rhs)}")
    return 0 if report.ok else 1


def cmd_canonical(args) -> int:
    model = _load_model(args.instance)
    joint = canonical_joint(model)
    if args.json:
        print(format_joint(joint, command="canonical"), end="")
    else:
        print(f"command: canonical {args.instance}")
        _print_joint(joint, print)
    return 0


def cmd_bounds(args) -> int:
    model = _load_model(args.instance)
    shape, schedule = _run_schedule(model, args.schedule, _choices_arg(args))
    if args.json:
        doc = {
            "command": "bounds",
            "schedule": shape,
            "steps": _steps_json(schedule),
        }
        print(json.dumps(doc, indent=2))
    else:
        print(f"command: bounds {args.instance}")
        print(f"schedule: {shape} with {schedule.num_steps} glue step(s)")
        _print_steps(schedule, print)
    return 0


def cmd_build(args) -> int:
    model = _load_model(args.instance)
    shape, schedule = _run_schedule(model, args.schedule, _choices_arg(args))
    if args.json:
        print(format_joint(schedule.final, command="build"), end="")
    else:
        print(f"command: build {args.instance}")
        print(f"schedule: {shape} with {schedule.num_steps} glue step(s)")
        _print_joint(schedule.final, print)
    return 0


def cmd_verify(args) -> int:
    model = _load_model(args.instance)
    joint = parse_joint(Path(args.joint).read_text(encoding="utf-8"))
    report = verify_joint(joint, model)
    if args.json:
        print(json.dumps({"command": "verify"} | _report_json(report), indent=2))
    else:
        print(f"command: verify {args.instance} --joint {args.joint}")
        print(f"joint reproduces all edge marginals: {'yes' if report.ok else 'no'}")
        for desc, lhs, rhs in report.violations:
            print(f"  {desc}: {rational_format(lhs)} != {rational_format(rhs)}")
    return 0 if report.ok else 1


def cmd_oracle(args) -> int:
    model = _load_model(args.instance)
    system = assemble_system(model)
    if args.scan is not None:
        _, schedule = _run_schedule(model, "auto", "canonical")
        step_index = args.step if args.step is not None else schedule.num_steps
        if not 1 <= step_index <= schedule.num_steps:
            print(f"error: no step {step_index} in a {schedule.num_steps}-step schedule",
                  file=sys.stderr)
            return 2
        family = schedule.steps[step_index - 1].family
        coord = args.scan - 1
        if not 1 <= args.scan <= family.num_params:
            print(f"error: step {step_index} has {family.num_params} parameters",
                  file=sys.stderr)
            return 2
        result = scan_interval(family, coord, args.resolution, "canonical", model=model)
        if args.json:
            doc = {
                "command": "oracle-scan",
                "step": step_index,
                "parameter": args.scan,
                "resolution": args.resolution,
                "interval": None if result is None else [rational_format(v) for v in result],
            }
            print(json.dumps(doc, indent=2))
        else:
            print(f"command: oracle {args.instance} --scan {args.scan}")
            if result is None:
                print(f"step {step_index} parameter {args.scan}: no feasible grid point "
                      f"at resolution {args.resolution}")
            else:
                lo, hi = result
                print(
                    f"step {step_index} parameter {args.scan}: scanned interval "
                    f"[{rational_format(lo)}, {rational_format(hi)}] "
                    f"at resolution {args.resolution}"
                )
        return 0
    witness = feasible(system)
    if args.json:
        doc = {
            "command": "oracle",
            "unknowns": system.num_unknowns,
            "equations": len(system.rows),
            "feasible": witness is not None,
        }
        if witness is not None:
            doc["witness"] = [rational_format(x) for x in witness]
        print(json.dumps(doc, indent=2))
    else:
        print(f"command: oracle {args.instance}")
        print(f"system: {system.num_unknowns} unknowns, {len(system.rows)} equations")
        print(f"feasible: {'yes' if witness is not None else 'no'}")
        if witness is not None:
            k = len(system.vars)
            for i, x in enumerate(witness):
                print(f"p({_outcome_label(i, k)}) = {rational_format(x)}")
    return 0 if witness is not None else 1


def cmd_demo(args) -> int:
    return 0 if run_demo(print) else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treemarg",
        description=(
            "Exact joint distributions from pairwise marginals on "
            "tree-structured systems of binary variables."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, instance=True):
        p = sub.add_parser(name, help=help_text)
        if instance:
            p.add_argument("instance", help="instance file (JSON)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check vertex-marginal consistency")
    add("canonical", cmd_canonical, "print the product-formula joint")

    def add_schedule_args(p):
        p.add_argument("--schedule", choices=("auto", "chain", "star", "tree"),
                       default="auto", help="schedule shape (default: auto-detect)")
        p.add_argument("--choices", help="choices file with per-step parameters")
        p.add_argument("--policy", choices=("canonical", "midpoint", "lower", "upper"),
                       default="canonical", help="parameter policy when no choices file")

    p_bounds = add("bounds", cmd_bounds, "print per-step parameter boxes")
    add_schedule_args(p_bounds)
    p_build = add("build", cmd_build, "build a full joint from choices or a policy")
    add_schedule_args(p_build)

    p_verify = add("verify", cmd_verify, "check a joint file against the instance")
    p_verify.add_argument("--joint", required=True, help="joint file (JSON)")

    p_oracle = add("oracle", cmd_oracle, "exact feasibility witness or interval scan")
    p_oracle.add_argument("--scan", type=int, help="1-based parameter to scan")
    p_oracle.add_argument("--step", type=int, help="1-based schedule step (default: last)")
    p_oracle.add_argument("--resolution", type=int, default=400, help="scan grid resolution")

    p_demo = sub.add_parser("demo", help="run the self-checking bundled example")
    p_demo.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceSyntaxError, InstanceSemanticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TreeMarginalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
