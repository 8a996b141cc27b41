"""Model checking of fixpoint+counting formulas over improvement graphs.

The package splits into a graph container (graph), a small logic with a
parser and pretty printer (formulas, parser), a table-based evaluator
with swappable dense/packed kernels (evaluator, backends), compilers
from games, elections and allocations (builders), stock property
formulas (properties) and independent brute-force reference answers
(oracle).
"""

from .builders import (
    AllocationInstance,
    GameInstance,
    VotingInstance,
    build_allocation_graph,
    build_from_instance,
    build_game_graph,
    build_voting_graph,
    instance_from_json_dict,
    load_instance,
    top_trading_cycle,
)
from .errors import (
    FormulaSyntaxError,
    IgcheckError,
    InstanceError,
    InvalidArgumentError,
    MacroError,
    NonMonotoneFixpointError,
    QueryError,
    ResourceError,
    VocabularyError,
    WellFormednessError,
)
from .evaluator import (
    EvalStats,
    Evaluator,
    Verdict,
    evaluate,
    evaluate_sub,
    evaluate_with_stats,
    lfp_eval,
)
from .graph import ImprovementGraph
from .oracle import (
    OracleReport,
    oracle_acyclic,
    oracle_envy_free,
    oracle_nash,
    oracle_path_count,
    oracle_reach_count,
    oracle_report,
    oracle_sinks,
    oracle_weakly_acyclic,
)
from .parser import load_formula_file, parse, parse_definitions, pretty
from .properties import (
    PROPERTY_NAMES,
    acyclic,
    build_property,
    envy_free,
    k_fip,
    path_count,
    phi_reachable,
    sink,
    sink_k,
    special,
    weakly_acyclic,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationInstance",
    "EvalStats",
    "Evaluator",
    "FormulaSyntaxError",
    "GameInstance",
    "IgcheckError",
    "ImprovementGraph",
    "InstanceError",
    "InvalidArgumentError",
    "MacroError",
    "NonMonotoneFixpointError",
    "OracleReport",
    "PROPERTY_NAMES",
    "QueryError",
    "ResourceError",
    "Verdict",
    "VocabularyError",
    "VotingInstance",
    "WellFormednessError",
    "acyclic",
    "build_allocation_graph",
    "build_from_instance",
    "build_game_graph",
    "build_property",
    "build_voting_graph",
    "envy_free",
    "evaluate",
    "evaluate_sub",
    "evaluate_with_stats",
    "instance_from_json_dict",
    "k_fip",
    "lfp_eval",
    "load_formula_file",
    "load_instance",
    "oracle_acyclic",
    "oracle_envy_free",
    "oracle_nash",
    "oracle_path_count",
    "oracle_reach_count",
    "oracle_report",
    "oracle_sinks",
    "oracle_weakly_acyclic",
    "parse",
    "parse_definitions",
    "path_count",
    "phi_reachable",
    "pretty",
    "sink",
    "sink_k",
    "special",
    "top_trading_cycle",
    "weakly_acyclic",
    "__version__",
]
