"""List satisfiability of binary CSPs: products, decoders and reductions."""

from .core import (
    Assignment,
    ClosureWitness,
    Constraint,
    CspInstance,
    ListReport,
    MultiAssignment,
    RectangularDecomposition,
    evaluate,
    evaluate_list,
    normalize,
    rectangular_decompose,
    restrict,
    validate_instance,
)
from .decoder import (
    BipartiteListAssignment,
    BlockingCertificate,
    DecodeParams,
    DecoderOutcome,
    InconsistentPair,
    ParameterViolation,
    ParameterWarning,
    decode,
    decode_theorem,
    decode_unit,
    forced_assignment,
)
from .errors import (
    InvalidInput,
    NotRectangular,
    ParameterError,
    SizeCapExceeded,
    TriviallyUnsatisfiable,
    Uncoverable,
)
from .product import (
    ProductInstance,
    bipartite_product,
    direct_product,
    example1_avg_bound,
    example1_instance,
    example1_lists,
    lift,
    partial_satisfying_assignments,
    restrict_product_lists,
)
from .reductions import (
    PartitionSystem,
    SetCoverInstance,
    clique_to_csp,
    cover_to_lists,
    csp_to_exactcover,
    partition_system,
)
from .solver import all_solutions, brute_list_solve, brute_min_cover, count_solutions, solve

__all__ = [name for name in dir() if not name.startswith("_")]
