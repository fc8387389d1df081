"""Certified constant-factor upper bounds on edit distance in sub-quadratic time.

The gap algorithm covers the diagonal band of the alignment grid with
certified boxes and then finds a cheapest path through the grid graph
augmented by one shortcut edge per good box.
"""

from .core import (AlphabetError, BoxSpec, CertificationError, CertifiedBox, Counters,
                   CoverParams, EdxError, EstimateReport, Interval, NormalizedPair, OutOfRange,
                   ParamInfeasible, TokenString, aligned_candidates, alignment_step,
                   normalize_pair, w_decomposition)
from .covering import (BoxSet, audit_boxes, covering_algorithm, diagonal_extension, dsr,
                       select_params, sses)
from .estimator import GapConfig, ed_ub, gap_ub, round_theta
from .exact_dp import (OVER_BOUND, banded_edit_distance, bounded_edit_distance,
                       edit_distance_full, small_ed)
from .harness import (PlantedInstance, ScalingReport, gap_contract_trial, gen_planted,
                      run_scaling_experiment)
from .shortcut_graph import (ShortcutEdge, ShortcutGraph, boxes_to_shortcuts, min_cost_path,
                             min_cost_path_naive)

__version__ = "0.1.0"

__all__ = [
    "AlphabetError", "BoxSet", "BoxSpec", "CertificationError", "CertifiedBox", "Counters",
    "CoverParams", "EdxError", "EstimateReport", "GapConfig", "Interval", "NormalizedPair",
    "OVER_BOUND", "OutOfRange", "ParamInfeasible", "PlantedInstance", "ScalingReport",
    "ShortcutEdge", "ShortcutGraph", "TokenString", "aligned_candidates", "alignment_step",
    "audit_boxes", "banded_edit_distance", "bounded_edit_distance", "boxes_to_shortcuts",
    "covering_algorithm", "diagonal_extension", "dsr", "ed_ub", "edit_distance_full",
    "gap_contract_trial", "gap_ub", "gen_planted", "min_cost_path", "min_cost_path_naive",
    "normalize_pair", "round_theta", "run_scaling_experiment", "select_params", "small_ed",
    "sses", "w_decomposition",
]
