"""Exception and warning types shared across the library."""


class BalredError(Exception):
    """Base class for all library errors."""


class SingularSystem(BalredError):
    """Lyapunov solve is numerically singular (eigenvalue pair with lambda_i + lambda_j ~ 0)."""


class Unstable(BalredError):
    """Operation requires a Hurwitz A matrix."""


class NotMinimal(BalredError):
    """Gramian is numerically rank deficient; the realization is not minimal."""


class PoleHit(BalredError):
    """Transfer function evaluated at (or too close to) a pole of the system."""


class DegenerateHSV(BalredError):
    """Two Hankel singular values coincide; the balanced parameterization is singular there."""


class NotBalanced(BalredError):
    """Realization fails the diag(B B^T) = diag(C^T C) consistency check."""


class ZeroRow(BalredError):
    """A row of B_bar has (numerically) zero norm; signals non-minimality."""


class BadOrder(BalredError):
    """Requested reduction order k is out of range."""


class SingularA22(BalredError):
    """Trailing block A22 is numerically singular; Schur complement undefined."""


class EtaOutOfRange(BalredError):
    """Interpolation knob outside [0, theta_removed]."""


class DomainViolation(BalredError):
    """Finite-difference probe point left the parameter domain."""


class SingularFIM(BalredError):
    """Fisher information matrix condition number exceeds the allowed maximum."""


class IntegrationFailure(BalredError):
    """ODE integration failed to reach the requested times."""


class StepFailure(BalredError):
    """Geodesic integrator step size underflowed before any termination condition."""


class Inconclusive(BalredError):
    """Geodesic trace ended on tau_max without any parameter diverging."""


class NonConvergence(BalredError):
    """Least-squares refit stopped before reaching the gradient tolerance."""


class SplitAtRepeatedHSVWarning(UserWarning):
    """Truncation cut placed between two nearly equal Hankel singular values."""


class NotMinimalWarning(UserWarning):
    """Gramian nearly singular; results may be inaccurate."""


class DegenerateFIMWarning(UserWarning):
    """Smallest FIM eigenvalue not well separated; initial direction is a tie-break."""


class UnstableRealizationWarning(UserWarning):
    """Realized balanced system is not Hurwitz."""
