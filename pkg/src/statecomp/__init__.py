"""Collective comparison of quantum states.

Given one copy each of N qudits, decide whether their states are all
identical. The library provides the exact symmetric-subspace strategies
(never wrong, sometimes inconclusive), their refinement into Young-diagram
outcomes, optimal minimum-error and minimum-cost two-hypothesis verdicts,
and the balanced-multiport realization with exact boson/fermion click
statistics.
"""

from .comparison import (
    ALL_DIFFERENT,
    DIFFERENT,
    INCONCLUSIVE,
    NOT_ALL_SAME,
    SAME,
    ComparisonStrategy,
    OutcomeLabel,
    apply_strategy,
    detailed_strategy,
    success_probability_analytic,
    success_probability_mc,
    universal_strategy,
)
from .discrimination import (
    ComparisonScenario,
    CostMatrix,
    HypothesisPair,
    MINIMUM_ERROR_COSTS,
    bayes,
    build_hypotheses,
    errorfree_plus_guess,
    helstrom,
    inconclusive_guess_errors,
    simulate_strategy,
    threshold_hypotheses,
    trine_scenario,
)
from .errors import (
    DegenerateScenarioError,
    DimensionCapError,
    NumericalCheckError,
    PauliViolationError,
)
from .hilbert import (
    Operator,
    PureState,
    WeightedEnsemble,
    density_of,
    expectation,
    haar_random_state,
    hermitian_eig,
    tensor_product,
)
from .multiport import (
    MultiportInput,
    MultiportUnitary,
    Statistics,
    coarsen_threshold,
    dft_multiport,
    fermion_identical_bound,
    output_distribution,
    pairwise_efficiency_mc,
    permanent,
    realization_efficiency_mc,
    unambiguous_patterns,
    unambiguous_threshold_signatures,
)
from .sampling import MonteCarloEstimate, RandomStream
from .symmetry import (
    Partition,
    Permutation,
    irrep_character,
    irrep_dimension,
    isotypic_projector,
    max_identical,
    pairwise_antisym_projector,
    partitions_of,
    permutation_operator,
    subspace_dimension,
    symmetric_projector,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_DIFFERENT", "DIFFERENT", "INCONCLUSIVE", "NOT_ALL_SAME", "SAME",
    "ComparisonScenario", "ComparisonStrategy", "CostMatrix",
    "DegenerateScenarioError", "DimensionCapError", "HypothesisPair",
    "MINIMUM_ERROR_COSTS", "MonteCarloEstimate", "MultiportInput",
    "MultiportUnitary", "NumericalCheckError", "Operator", "OutcomeLabel",
    "Partition", "PauliViolationError", "Permutation", "PureState",
    "RandomStream", "Statistics", "WeightedEnsemble", "apply_strategy",
    "bayes", "build_hypotheses", "coarsen_threshold", "density_of",
    "detailed_strategy", "dft_multiport", "errorfree_plus_guess",
    "expectation", "fermion_identical_bound", "haar_random_state",
    "helstrom", "hermitian_eig", "inconclusive_guess_errors",
    "irrep_character", "irrep_dimension", "isotypic_projector",
    "max_identical", "output_distribution", "pairwise_antisym_projector", "pairwise_efficiency_mc",
    "partitions_of", "permanent", "permutation_operator",
    "realization_efficiency_mc", "simulate_strategy",
    "subspace_dimension", "success_probability_analytic",
    "success_probability_mc", "symmetric_projector", "tensor_product",
    "threshold_hypotheses", "trine_scenario", "unambiguous_patterns",
    "unambiguous_threshold_signatures", "universal_strategy",
]
