"""Unsupervised fuzzy joins at a target precision.

Given a reference table L, a query table R, and a precision target, the
engine searches a space of join configurations (preprocessing, tokenizer,
token weights, distance kind, threshold) and returns a many-to-one join
maximizing estimated recall subject to the estimated precision staying
above the target.  No labeled examples are used: precision is estimated
from the geometry of the reference table itself.
"""

from .blocking import CandidateIndex, IndexStats, blocking_cutoff, build_index, index_stats
from .distances import (
    char_distance,
    contain_distance,
    distance_matrix,
    evaluate,
    jaro_similarity,
    jaro_winkler_similarity,
    levenshtein,
    register_plugin,
    set_distance,
)
from .estimation import (
    BallCounter,
    ConfigStats,
    UnionStats,
    config_stats,
    pair_precision,
    union_stats,
)
from .evaluation import (
    DROP_ONLY_PROFILE,
    GroundTruth,
    MIXED_PROFILE,
    MetricsReport,
    PerturbationProfile,
    RobustnessPoint,
    TYPO_ONLY_PROFILE,
    add_random_column,
    adjusted_recall,
    generate_disjoint_tables,
    generate_synthetic,
    inject_irrelevant_rows,
    pr_auc,
    recall_upper_bound,
    robustness_beta_sweep,
    robustness_drivers,
    robustness_irrelevant_r,
    robustness_sparse_l,
    robustness_zero_join,
    score,
)
from .functions import (
    Assignment,
    Configuration,
    FunctionSpaceOptions,
    JoinFunction,
    JoinResult,
    Solution,
    dump_solution,
    enumerate_function_space,
    load_solution,
    parse_solution,
    save_solution,
)
from .multicolumn import MultiSolveResult, combined_distance, interpolate, solve_multi
from .negative_rules import (
    NegativeRule,
    apply_rules,
    dump_rules,
    learn_rules,
    pair_blocked,
    preprocess_for_rules,
    word_delta,
)
from .pipeline import ConfigError, PipelineOutcome, RunConfig, StageError, run_pipeline
from .solver import (
    SearchSpace,
    SolveResult,
    build_search_space,
    discretize_thresholds,
    greedy_select,
    profit,
    solve,
)
from .stem import stem
from .tables import DataError, Record, Table, load_table, make_table
from .text import (
    IdfIndex,
    TokenBag,
    apply_preprocess,
    bag_weight,
    build_idf,
    build_idf_from_values,
    token_weight,
    tokenize,
)

__version__ = "0.1.0"
