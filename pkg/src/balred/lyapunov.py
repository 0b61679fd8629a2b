"""Lyapunov solves, Gramians, and the Lyapunov-based stability test."""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

from .config import DEFAULT, Tolerances
from .errors import NotMinimalWarning, SingularSystem, Unstable
from .statespace import StateSpace


def solve_lyapunov(A, Q, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Solve A X + X A^T = -Q for symmetric X.

    Backed by scipy's Bartels-Stewart solver; the returned X is symmetrized
    and the residual is verified a posteriori, which also catches the
    marginally stable case (an eigenvalue pair lambda_i + lambda_j ~ 0).
    """
    A = np.asarray(A, dtype=float)
    Q = np.asarray(Q, dtype=float)
    try:
        with warnings.catch_warnings():
            # scipy warns (and perturbs coefficients) when lambda_i + lambda_j ~ 0;
            # for us that means the equation is singular, not merely delicate
            warnings.simplefilter("error", RuntimeWarning)
            X = scipy.linalg.solve_continuous_lyapunov(A, -Q)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError, RuntimeWarning) as exc:
        raise SingularSystem(f"Lyapunov solve failed: {exc}") from exc
    if not np.all(np.isfinite(X)):
        raise SingularSystem("Lyapunov solve produced non-finite entries")
    X = 0.5 * (X + X.T)
    residual = np.linalg.norm(A @ X + X @ A.T + Q, "fro")
    # Backward-error normalization: for stiff stable A the attainable
    # residual scales with ||A|| ||X||, not just ||Q||.
    scale = max(
        1.0,
        float(np.linalg.norm(Q, "fro")),
        2.0 * float(np.linalg.norm(A, "fro")) * float(np.linalg.norm(X, "fro")),
    )
    if residual > tol.lyapunov_residual * scale:
        raise SingularSystem(
            f"Lyapunov residual {residual:.3e} exceeds tolerance; "
            "A likely has an eigenvalue pair summing to ~0"
        )
    return X


def is_stable(sys_or_A) -> bool:
    """True iff A^T X + X A = -I has a symmetric positive-definite solution.

    Avoids a nonsymmetric eigensolver; returns False on any solver failure.
    """
    A = sys_or_A.A if isinstance(sys_or_A, StateSpace) else np.asarray(sys_or_A, dtype=float)
    try:
        X = solve_lyapunov(A.T, np.eye(A.shape[0]))
        np.linalg.cholesky(X)
    except (SingularSystem, np.linalg.LinAlgError):
        return False
    return True


def gramians(sys: StateSpace, tol: Tolerances = DEFAULT) -> tuple[np.ndarray, np.ndarray]:
    """Controllability and observability Gramians (P, Qo).

    P solves A P + P A^T = -B B^T and Qo solves A^T Qo + Qo A = -C^T C.
    Emits NotMinimalWarning when either Gramian is numerically rank
    deficient (not fatal).
    """
    if not is_stable(sys):
        raise Unstable("gramians require a Hurwitz A matrix")
    P = solve_lyapunov(sys.A, sys.B @ sys.B.T, tol)
    Qo = solve_lyapunov(sys.A.T, sys.C.T @ sys.C, tol)
    for name, G in (("controllability", P), ("observability", Qo)):
        w = np.linalg.eigvalsh(G)
        if w[0] <= tol.minimality * w[-1]:
            warnings.warn(
                f"{name} Gramian nearly singular (min/max eig {w[0]:.2e}/{w[-1]:.2e})",
                NotMinimalWarning,
                stacklevel=2,
            )
    return P, Qo
