"""nodelabel: sequential node-labeling problems on graphs.

Classical heuristics, exact branch-and-bound references, and an attention
policy trained with policy gradients, all sharing one episode abstraction:
pick an unlabeled node, let the problem's label rule tag it, repeat until
the labeling is complete. Everything downstream of a seed is reproducible
bit for bit.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .autodiff import OpCounter, Tape, Tensor, backward, count_operations
from .decoder import context_embedding, decode_step
from .encoder import encode
from .errors import (
    BudgetExceededError,
    CheckpointError,
    DomainError,
    IllegalActionError,
    NodeLabelError,
    NumericError,
    ParameterError,
    ParseError,
    ShapeError,
    UsageError,
)
from .evaluation import ExperimentConfig, algorithm_names, run_experiment
from .features import degree_features
from .gradcheck import gradient_check
from .graph_io import load_graph, parse_dimacs, parse_edge_list, save_graph
from .graphs import (
    FAMILIES,
    GeneratorSpec,
    Graph,
    disjoint_union,
    generate_graph,
    largest_component,
    sparse_er_probability,
)
from .heuristics import (
    HEURISTICS,
    dsatur,
    largest_first,
    mvc_approx,
    run_heuristic,
    smallest_last,
)
from .model import (
    ModelParameters,
    init_parameters,
    load_checkpoint,
    parse_checkpoint,
    save_checkpoint,
)
from .oracles import OracleResult, best_ordering_cost, exact_chromatic, exact_mvc
from .problems import (
    GC,
    INFINITE_COST,
    MIS,
    MVC,
    PROBLEM_NAMES,
    UNLABELED,
    MdpState,
    PartialLabeling,
    Trajectory,
    apply_action,
    get_problem,
    random_episode,
    rollout_with_ordering,
    verify_and_cost,
)
from .rollout import greedy_rollout, sample_rollout
from .stats import paired_t_test, regularized_incomplete_beta, student_t_cdf
from .training import Adam, TrainConfig, train

__all__ = [
    "Adam",
    "BudgetExceededError",
    "CheckpointError",
    "DomainError",
    "ExperimentConfig",
    "FAMILIES",
    "GC",
    "GeneratorSpec",
    "Graph",
    "HEURISTICS",
    "IllegalActionError",
    "INFINITE_COST",
    "KERNEL_BACKEND",
    "MIS",
    "MVC",
    "MdpState",
    "ModelParameters",
    "NodeLabelError",
    "NumericError",
    "OpCounter",
    "OracleResult",
    "ParameterError",
    "ParseError",
    "PartialLabeling",
    "PROBLEM_NAMES",
    "ShapeError",
    "Tape",
    "Tensor",
    "Trajectory",
    "UNLABELED",
    "UsageError",
    "algorithm_names",
    "apply_action",
    "backward",
    "best_ordering_cost",
    "context_embedding",
    "count_operations",
    "decode_step",
    "degree_features",
    "disjoint_union",
    "dsatur",
    "encode",
    "exact_chromatic",
    "exact_mvc",
    "generate_graph",
    "get_problem",
    "gradient_check",
    "greedy_rollout",
    "init_parameters",
    "largest_component",
    "largest_first",
    "load_checkpoint",
    "load_graph",
    "mvc_approx",
    "paired_t_test",
    "parse_checkpoint",
    "parse_dimacs",
    "parse_edge_list",
    "random_episode",
    "regularized_incomplete_beta",
    "rollout_with_ordering",
    "run_experiment",
    "run_heuristic",
    "sample_rollout",
    "save_checkpoint",
    "save_graph",
    "smallest_last",
    "sparse_er_probability",
    "student_t_cdf",
    "train",
    "TrainConfig",
    "verify_and_cost",
]
