"""Central numerical tolerance defaults.

All magic thresholds used across the library live here so they can be
audited (and, where an operation takes a ``tol`` argument, overridden)
in one place.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # Lyapunov solves: ||A X + X A^T + Q||_F <= lyapunov_residual * max(1, ||Q||_F)
    lyapunov_residual: float = 1e-10
    # Gramian considered rank deficient when min eig <= minimality * max eig
    minimality: float = 1e-10
    # Frequency-response agreement checks (similarity invariance etc.)
    response_rel: float = 1e-8
    # |theta_i^2 - theta_j^2| <= hsv_degenerate * theta_1^2 rejects the alpha formula
    hsv_degenerate: float = 1e-12
    # Lemma-1 deviation allowed on a balanced realization
    lemma1_rel: float = 1e-8
    # H-infinity norm: relative accuracy of grid + golden-section search
    hinf_rel: float = 1e-4
    hinf_grid_points: int = 400
    # Interpolated reduction endpoint identities (exact algebra, rounding only)
    interp_endpoint_rel: float = 1e-13
    # Geodesic integration
    geodesic_rtol: float = 1e-8
    geodesic_atol: float = 1e-10
    # Geodesic termination.  The FIM condition cap leaves room for 5+-decade
    # parameter excursions near a boundary, so ToZero/ToInfinity calls stay
    # stable when the classification thresholds are perturbed by a decade.
    log10_param_bound: float = 6.0
    velocity_blowup: float = 1e6
    fim_condition_max: float = 1e14
    # Limit classification
    to_zero_factor: float = 1e-4
    to_infinity_factor: float = 1e4


DEFAULT = Tolerances()
