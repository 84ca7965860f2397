"""Symmetry reduction by nonisomorphic prefix assignment.

Enumerates, exactly once per isomorphism class, the assignments to a
chosen prefix of variables of a constraint system whose symmetry group is
given as the automorphism group of a vertex-colored graph, and emits the
result as solver cubes, an incremental CNF, or a symmetry-breaking
predicate.
"""

from .canon import ColoredGraph, CanonResult, canonical_form, refine
from .core import (Assignment, PrefixPlan, SearchStats, WorkItem,
                   build_prefix_plan, run_sequential)
from .dist import StackPolicy, run_parallel
from .encode import (Cnf, SymmetryModel, attach_assignment, attach_set,
                     cnf_to_model, kappa_of_assignment, load_aux_model)
from .oracle import burnside_graph_count, exact_cover_check, \
    orbit_count_exhaustive
from .perm import GeneratorSet

__all__ = [
    "Assignment", "CanonResult", "Cnf", "ColoredGraph", "GeneratorSet",
    "PrefixPlan", "SearchStats", "StackPolicy", "SymmetryModel", "WorkItem",
    "attach_assignment", "attach_set", "build_prefix_plan",
    "burnside_graph_count", "canonical_form", "cnf_to_model",
    "exact_cover_check", "kappa_of_assignment", "load_aux_model",
    "orbit_count_exhaustive", "refine", "run_parallel", "run_sequential",
]
