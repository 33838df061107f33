"""Random generating pairs of symmetric groups: constructive short words,
spectral gaps, and mixing times."""

__version__ = "0.1.0"

from .errors import (
    BudgetExceededError,
    MixingCapError,
    PermwordError,
    RetryExhaustedError,
    SideConditionError,
    WordParseError,
)
from .perm import (
    Permutation,
    compose,
    conjugate,
    cycle_structure,
    format_images,
    format_permutation,
    invert,
    longest_cycle,
    parity,
    parse_permutation,
    random_even,
    random_uniform,
    support,
    three_cycle_factorization,
)
from .word import (
    Cat,
    Concat,
    GEN_G,
    GEN_H,
    Gen,
    GeneratorCounts,
    Inv,
    Pow,
    Word,
    WordElement,
    concat,
    empty_word,
    evaluate,
    expanded_length,
    generator_counts,
    inverse,
    node_count,
    parse,
    power,
    serialize,
    structurally_equal,
)
from .walk import (
    DenseGroup,
    Distribution,
    WalkMeasure,
    check_argu,
    check_beeth,
    distance_to_uniform,
    evolve_exact,
    lazy_generator_measure,
    lazy_measure,
    mixing_time_lp,
    mu_prime,
    sample_walk,
    strong_mixing_time,
    three_cycle_lazy_measure,
    three_cycles,
)
from .repgap import (
    GapExact,
    cayley_spectrum_bruteforce,
    char_ratio_3cycle,
    garna_check,
    spectral_gap_exact,
)
from .schreier import GapEstimate, TupleGraph, conditioned_walk, estimate_gap
from .shrink import (
    LongCycleElement,
    ShrinkConfig,
    ShrinkResult,
    find_long_cycle_element,
    shrink_support,
    word_length_budget,
)
from .synth import SynthContext, prepare_context, synthesize
from .compare import (
    ComparisonReport,
    bfs_words,
    comparison_report,
    compute_A,
    gap_lower_bound,
    l2_comparison_bound,
    reference_measure,
)

__all__ = [
    "__version__",
    "BudgetExceededError",
    "MixingCapError",
    "PermwordError",
    "RetryExhaustedError",
    "SideConditionError",
    "WordParseError",
    "Permutation",
    "compose",
    "conjugate",
    "cycle_structure",
    "format_images",
    "format_permutation",
    "invert",
    "longest_cycle",
    "parity",
    "parse_permutation",
    "random_even",
    "random_uniform",
    "support",
    "three_cycle_factorization",
    "Cat",
    "Concat",
    "GEN_G",
    "GEN_H",
    "Gen",
    "GeneratorCounts",
    "Inv",
    "Pow",
    "Word",
    "WordElement",
    "concat",
    "empty_word",
    "evaluate",
    "expanded_length",
    "generator_counts",
    "inverse",
    "node_count",
    "parse",
    "power",
    "serialize",
    "structurally_equal",
    "DenseGroup",
    "Distribution",
    "WalkMeasure",
    "check_argu",
    "check_beeth",
    "distance_to_uniform",
    "evolve_exact",
    "lazy_generator_measure",
    "lazy_measure",
    "mixing_time_lp",
    "mu_prime",
    "sample_walk",
    "strong_mixing_time",
    "three_cycle_lazy_measure",
    "three_cycles",
    "GapExact",
    "cayley_spectrum_bruteforce",
    "char_ratio_3cycle",
    "garna_check",
    "spectral_gap_exact",
    "GapEstimate",
    "TupleGraph",
    "conditioned_walk",
    "estimate_gap",
    "LongCycleElement",
    "ShrinkConfig",
    "ShrinkResult",
    "find_long_cycle_element",
    "shrink_support",
    "word_length_budget",
    "SynthContext",
    "prepare_context",
    "synthesize",
    "ComparisonReport",
    "bfs_words",
    "comparison_report",
    "compute_A",
    "gap_lower_bound",
    "l2_comparison_bound",
    "reference_measure",
]
