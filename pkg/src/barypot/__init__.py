"""Barycentric interpolation on [-1,1] analyzed through logarithmic
potential theory: weights, Lebesgue constants, and their growth bounds."""

__version__ = "0.1.0"

from .analysis import (
    BoundsReport,
    ConvexityError,
    DeltaBounds,
    InterPotentialSet,
    build_bounds_report,
    check_lebesgue_lower,
    check_lebesgue_upper,
    check_ratio_bounds,
    check_weight_bounds,
    convergence_experiment,
    count_high_potential_nodes,
    inter_potential_points,
    lebesgue_upper_value,
    measure_delta,
    pointwise_growth_rate,
    shifted_x_hat,
)
from .cli import ConfigError, ExperimentConfig, RunManifest, load_config, run, validate
from .barycentric import (
    LebesgueReport,
    WeightSet,
    basis_abs,
    interpolate,
    lebesgue_constant,
    lebesgue_function,
    weight_ratio_log,
    weights_from_nodes,
)
from .density import (
    DensitySpec,
    DomainError,
    NodeSet,
    QuantileSolveError,
    SpacingProfile,
    cdf,
    chebyshev_nodes,
    density_eval,
    equidistant_nodes,
    erf,
    generate_nodes,
    spacing_profile,
    verify_obedience,
)
from .fh import (
    FHConfig,
    PoleSet,
    denominator_roots,
    fh_potential_report,
    fh_ratio_growth,
    fh_weight_integers,
    fh_weights,
)
from .potential import (
    ContinuousPotential,
    DiscretePotential,
    ExternalField,
    PotentialExtrema,
    complex_grid_sample,
    continuous_potential_eval,
    discrete_potential_deriv,
    discrete_potential_eval,
    equilibrium_field,
    half_i_functional_field,
    half_i_pole_field,
    log_potential,
    log_potential_deriv,
    no_field,
    pole_field,
    potential_extrema,
)
