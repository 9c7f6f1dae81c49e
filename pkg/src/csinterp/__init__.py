"""Compressed-sensing function interpolation with weighted l1 minimization.

Approximates smooth functions on (-1, 1)^d from random pointwise samples by
solving a weighted basis-pursuit-denoise problem over a truncated tensor
Chebyshev or Legendre expansion, and computes the closed-form quantities
(measurement condition, lambda factor, lower-set bounds, truncation factor)
that govern when such recovery succeeds.
"""

__version__ = "0.1.0"

from .basis import (
    SCENARIOS,
    BasisSpec,
    eval_tensor,
    eval_univariate,
    intrinsic_weight,
    intrinsic_weights,
    measure_density_ratio,
    quadrature_rule,
)
from .indexsets import (
    IndexSet,
    build_hyperbolic_cross,
    build_tensor_product,
    build_total_degree,
    hyperbolic_cross_cardinality_bound,
    is_lower,
    lower_set_bound_check,
    random_lower_set,
    weighted_cardinality,
)
from .measurement import (
    MeasurementSystem,
    SampleSet,
    assemble_matrix,
    build_system,
    draw_samples,
    export_system,
    measure_function,
)
from .solver import (
    InfeasibleProblem,
    NonFiniteInput,
    SolveResult,
    SolverError,
    SolverOptions,
    WeightVector,
    check_interpolation,
    solve_lp_oracle,
    solve_weighted_bpdn,
)
from .guarantees import (
    GuaranteeReport,
    PriorSupportReport,
    TruncationReport,
    lambda_factor,
    measurement_quantity,
    prior_support_quantities,
    sufficient_m,
    truncation_bound,
    weights_from_strategy,
)
from .reconstruction import (
    ErrorReport,
    TargetFunction,
    evaluate_expansion,
    oracle_coefficients,
    reconstruct,
)
from .functions import builtin_function, builtin_ids
from .experiments import (
    ExperimentConfig,
    ResultRow,
    bounds_report,
    config_hash,
    run_experiment,
)
