"""Exact tools for weight functions with unit block sums.

The package studies finite and lazily generated families of blocks
(finite sets of integer labels) and the polytope of nonnegative weight
functions whose sum over every block equals one.  It classifies extreme
points, enumerates vertices, decomposes interior points, and completes
truncated weight functions, all in exact rational arithmetic.
"""

from .errors import (
    BudgetError,
    ConditionsViolatedError,
    DepthExceededError,
    DuplicateBlockError,
    EmptyBlockError,
    EmptyFamilyError,
    EvenCyclePresentError,
    GeneratorInconsistentError,
    HorizonExhaustedError,
    InputError,
    InstanceTooLargeError,
    InternalPropertyError,
    NotACoverError,
    NotSimpleCycleError,
    NotSimpleError,
    NotStochasticError,
    PreconditionError,
    UnknownElementError,
)
from .family import (
    Block,
    CountingIdentity,
    EmptinessVerdict,
    FreshnessVerdict,
    MembershipReport,
    RemovalLog,
    SetFamily,
    WeightFunction,
    block_sum,
    build_family,
    check_freshness,
    check_injectivity,
    classify_membership,
    counting_identity,
    emptiness_test,
    max_multiplicity,
    multiplicity,
    normalize,
    require_stochastic,
    saturate,
)
from .graphs import (
    AssociatedGraph,
    Bipartition,
    CycleDecomposition,
    Path,
    bipartition,
    block_vertex_counts,
    build_graph,
    connected_components,
    decompose_cycle,
    enumerate_primitive_paths,
    find_primitive_cycles,
    is_primitive,
    is_simple,
    shortest_primitive_path,
    unique_primitive_paths,
    validate_path,
)
from .extremality import (
    Verdict,
    Witness,
    classify_extreme,
    construct_cycle_attachment,
    construct_tree_propagation,
    construct_two_coloring,
)
from .oracle import (
    DEFAULT_BUDGET,
    CrossValidation,
    Decomposition,
    cross_validate,
    decompose,
    enumerate_vertices,
    is_vertex,
    sup_block_norm,
    support_width,
)
from .extension import (
    ApproximationReport,
    ChosenStep,
    DisjointGrowingGenerator,
    ExtensionReport,
    ExtensionResult,
    FamilyGenerator,
    GridGenerator,
    PathGenerator,
    Truncation,
    WrappedFamilyGenerator,
    approximate_by_extremes,
    extend_truncation,
    get_generator,
    tail_sums,
    validate_truncation,
    verify_extension,
)
from .instance_io import (
    Instance,
    dump_instance,
    format_rational,
    load_instance,
    parse_instance,
    parse_rational,
)
from .demos import DemoResult, run_demo

__version__ = "0.1.0"

__all__ = [
    "ApproximationReport",
    "AssociatedGraph",
    "Bipartition",
    "Block",
    "BudgetError",
    "ChosenStep",
    "ConditionsViolatedError",
    "CountingIdentity",
    "CrossValidation",
    "CycleDecomposition",
    "DEFAULT_BUDGET",
    "Decomposition",
    "DemoResult",
    "DepthExceededError",
    "DisjointGrowingGenerator",
    "DuplicateBlockError",
    "EmptinessVerdict",
    "EmptyBlockError",
    "EmptyFamilyError",
    "EvenCyclePresentError",
    "ExtensionReport",
    "ExtensionResult",
    "FamilyGenerator",
    "FreshnessVerdict",
    "GeneratorInconsistentError",
    "GridGenerator",
    "HorizonExhaustedError",
    "InputError",
    "Instance",
    "InstanceTooLargeError",
    "InternalPropertyError",
    "MembershipReport",
    "NotACoverError",
    "NotSimpleCycleError",
    "NotSimpleError",
    "NotStochasticError",
    "Path",
    "PathGenerator",
    "PreconditionError",
    "RemovalLog",
    "SetFamily",
    "Truncation",
    "UnknownElementError",
    "Verdict",
    "WeightFunction",
    "Witness",
    "WrappedFamilyGenerator",
    "approximate_by_extremes",
    "bipartition",
    "block_sum",
    "block_vertex_counts",
    "build_family",
    "build_graph",
    "check_freshness",
    "check_injectivity",
    "classify_extreme",
    "classify_membership",
    "connected_components",
    "construct_cycle_attachment",
    "construct_tree_propagation",
    "construct_two_coloring",
    "counting_identity",
    "cross_validate",
    "decompose",
    "decompose_cycle",
    "dump_instance",
    "emptiness_test",
    "enumerate_primitive_paths",
    "enumerate_vertices",
    "extend_truncation",
    "find_primitive_cycles",
    "format_rational",
    "get_generator",
    "is_primitive",
    "is_simple",
    "is_vertex",
    "load_instance",
    "max_multiplicity",
    "multiplicity",
    "normalize",
    "parse_instance",
    "parse_rational",
    "require_stochastic",
    "run_demo",
    "saturate",
    "shortest_primitive_path",
    "sup_block_norm",
    "support_width",
    "tail_sums",
    "unique_primitive_paths",
    "validate_path",
    "validate_truncation",
    "verify_extension",
]
