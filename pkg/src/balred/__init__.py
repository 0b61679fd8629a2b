"""Balanced model reduction for LTI systems and geodesics on model manifolds.

Core pieces: Lyapunov/Gramian numerics and square-root balancing, the
(theta, r, beta, gamma, D) parameterization of balanced realizations,
Balanced Truncation / Balanced Singular Perturbation Approximation plus the
interpolated family between them, and a generic manifold-boundary engine
(Fisher information, geodesic integration, limit classification).
"""

from .balancing import BalancedRealization, balance, hankel_singular_values
from .balparam import (
    BalancedParams,
    ParamCensus,
    alpha,
    check_lemma1,
    extract_params,
    param_census,
    realize,
)
from .config import DEFAULT, Tolerances
from .errors import BalredError
from .lyapunov import gramians, is_stable, solve_lyapunov
from .mbam import (
    FitResult,
    GeodesicOptions,
    GeodesicTrace,
    LimitClassification,
    ParamModel,
    classify_limit,
    fim,
    geodesic_acceleration,
    initial_velocity,
    jacobian,
    refit_reduced,
    run_geodesic,
)
from .models import (
    ManifoldSample,
    NearestResult,
    mmr_model,
    nearest_on_family,
    response_point,
    sample_manifold,
    two_exp_model,
    two_state_freq_model,
)
from .reduction import (
    ReductionResult,
    balanced_truncate,
    bspa,
    error_bound,
    error_system,
    interpolated_reduce,
    partition,
    verify_bounds,
)
from .statespace import FrequencyResponse, StateSpace, random_stable_system
from .transfer import eval_transfer, frequency_response, hinf_norm

__version__ = "0.1.0"
