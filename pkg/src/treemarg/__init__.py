"""Exact joint distributions from pairwise marginals on trees.

Given a cycle-free graph whose vertices are binary random variables and
whose edges carry pairwise joint distributions, this package decides
whether the pairwise data is consistent, builds the canonical
(conditional-independence) joint, enumerates the full parametrized family
of joints reproducing every edge marginal, and cross-checks the results
with an independent exact linear-feasibility solver. All arithmetic uses
exact rationals; nothing in a correctness-bearing path touches floats.
"""

from .canonical import canonical_joint, canonical_params
from .gluing import (
    GlueFamily,
    GlueSchedule,
    GlueStep,
    POLICIES,
    chain_schedule,
    evaluate_family,
    glue_pair,
    reconstruct,
    star_schedule,
    tree_schedule,
)
from .instance_io import (
    format_choices,
    format_instance,
    format_joint,
    format_vector,
    parse_choices,
    parse_instance,
    parse_joint,
)
from .model import (
    MarginalModel,
    ProbReport,
    TreeGraph,
    build_model,
    build_tree,
    check_consistency,
    vertex_marginal,
)
from .oracle import (
    LinearSystem,
    assemble_system,
    feasible,
    scan_interval,
    verify_joint,
)
from .prob import (
    JointDist,
    MAX_VARS,
    as_rational,
    bits_index,
    make_joint,
    marginalize,
    outcome_bits,
    permute_vars,
    rational_format,
    rational_parse,
)

__version__ = "0.1.0"

__all__ = [
    "GlueFamily",
    "GlueSchedule",
    "GlueStep",
    "JointDist",
    "LinearSystem",
    "MAX_VARS",
    "MarginalModel",
    "POLICIES",
    "ProbReport",
    "TreeGraph",
    "as_rational",
    "assemble_system",
    "bits_index",
    "build_model",
    "build_tree",
    "canonical_joint",
    "canonical_params",
    "chain_schedule",
    "check_consistency",
    "evaluate_family",
    "feasible",
    "format_choices",
    "format_instance",
    "format_joint",
    "format_vector",
    "glue_pair",
    "make_joint",
    "marginalize",
    "outcome_bits",
    "parse_choices",
    "parse_instance",
    "parse_joint",
    "permute_vars",
    "rational_format",
    "rational_parse",
    "reconstruct",
    "scan_interval",
    "star_schedule",
    "tree_schedule",
    "verify_joint",
    "vertex_marginal",
]
