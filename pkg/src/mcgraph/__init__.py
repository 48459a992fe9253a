"""Coupled graph representations of the multiplicative coalescent.

Breadth-first walks, two spanning-forest processes, surplus-edge and
multigraph constructions, the excursion mosaic, an independent random graph
oracle, and samplers for the near-critical continuum objects.
"""

from .core import (EPS, ClockAssignment, RngStream, TieError, WeightVector, clocks_from_xi,
                   parse_masses, sample_clocks)
from .forests import (ForestEdge, ForestState, build_f0_snapshot, component_partition_at,
                      evolve_f1)
from .mosaic import (IdentityViolation, NotActiveError, ParallelogramRegion, check_tiling,
                     excursion_area, parallelogram_geometry, slice_area, verify_rate_identity)
from .oracle import (ExactLaw, TooLarge, enumerate_exact_law, sample_direct_graph,
                     simulate_direct_graph, simulate_direct_multigraph)
from .scaling import (AugmentedState, ContinuumPath, ScalingParams, TruncationWarning,
                      extract_excursions_and_marks, sample_continuum_path)
from .stats import (EmpiricalLaw, UnsupportedOutcome, chi_square_gof, chi_square_homogeneity,
                    ks_two_sided)
from .surplus import (ActivationTable, ConsistencyError, GraphSnapshot, SurplusEventLog,
                      activation_table, cumulative_intensity_f0, graph_process_g1,
                      sample_surplus_monotone, surplus_snapshot_f0)
from .walks import (ExcursionDecomposition, MergeSchedule, WalkPath, decompose_excursions,
                    eval_walk, merge_schedule, reflect_walk)

__version__ = "0.1.0"
