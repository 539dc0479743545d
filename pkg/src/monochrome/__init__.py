"""Monochromatic cycle partitions of coloured graphs."""

from .balancing import BalancingInfeasible, BalancingInstance, BalancingSolution, balance, balance_oracle, parity_adjust
from .errors import (
    BlowupTooLarge,
    ConstructionFailed,
    GraphFormatError,
    InfeasibleParameters,
    InstanceTooLarge,
    InternalContradiction,
    MinDegreeTooLow,
    MonochromeError,
    NotConnected,
    PreconditionViolated,
)
from .exact_partition import (
    CyclePart,
    CyclePartitionCertificate,
    Unsat,
    Violation,
    min_mono_cycle_partition,
    verify_certificate,
)
from .generators import (
    gen_extremal_a,
    gen_extremal_b,
    gen_random_min_degree,
    gen_random_reduced,
    gen_sharpness,
    gen_three_colour,
)
from .graph_core import (
    BLUE,
    GREEN,
    RED,
    ColouredGraph,
    ColouredMultiGraph,
    MonoComponent,
    SimpleGraph,
    monochromatic_components,
    spanning_component_pair,
    stable_sets,
)
from .hamilton import (
    bipartite_chvatal_check,
    chvatal_check,
    hamilton_cycle,
    hamilton_cycle_exact,
    hamilton_path_between,
    posa_cycle_cover,
    two_set_hamilton_path,
)
from .heuristic import HeuristicFailure, connect_short_path, heuristic_partition
from .structure import (
    BridgeWitness,
    ComponentSelection,
    ExtremalReport,
    admits_bridges,
    contracting_sets,
    detect_extremal,
    find_components,
)
from .two_matching import TutteWitness, TwoMatching, perfect_2_matching, robust_tutte, tutte_condition

__version__ = "0.1.0"
