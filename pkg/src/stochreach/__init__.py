"""Interval over-approximations of stochastic reach sets for discrete-time
nonlinear systems via mixed-monotone decompositions."""

from .distributions import (
    Degenerate,
    Gaussian,
    ProductDistribution,
    Uniform,
    cdf,
    equal_tail_interval,
    joint_confidence_box,
    quantile,
    sample,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DecompositionError,
    DimensionError,
    NumericalError,
    StochReachError,
)
from .intervals import IntervalVector, contains, hull, leq, southeast_leq, width
from .kernels import BACKEND
from .montecarlo import (
    check_monotone_concentration,
    check_stochastic_order,
    empirical_containment,
    sample_trajectories,
)
from .reach import ReachStep, ReachTube, delta_update, run_reachability
from .system import (
    DecompositionFunction,
    EmbeddingState,
    SearchConfig,
    StochasticSystem,
    SystemDynamics,
    embed_step,
    linear_decomposition,
    propagate_interval,
    tight_decomposition_numeric,
    validate_decomposition,
)

__version__ = "0.1.0"
