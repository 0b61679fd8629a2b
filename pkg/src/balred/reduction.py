"""Balanced Truncation, Balanced Singular Perturbation Approximation, and
the one-knob-per-state family interpolating between them."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .balancing import BalancedRealization, balance
from .config import DEFAULT, Tolerances
from .errors import BadOrder, EtaOutOfRange, SingularA22, SplitAtRepeatedHSVWarning
from .statespace import StateSpace
from .transfer import hinf_norm


@dataclass(frozen=True)
class ReductionResult:
    reduced: StateSpace
    method: str  # "BT" | "BSPA" | "INTERP"
    removed_states: int
    eta: np.ndarray  # interpolation knobs, empty unless INTERP
    a_priori_bound: float

    def to_dict(self) -> dict:
        return {
            "reduced": self.reduced.to_dict(),
            "method": self.method,
            "removed_states": self.removed_states,
            "eta": np.asarray(self.eta).tolist(),
            "a_priori_bound": self.a_priori_bound,
        }


class Blocks(NamedTuple):
    A11: np.ndarray
    A12: np.ndarray
    A21: np.ndarray
    A22: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    C1: np.ndarray
    C2: np.ndarray


def partition(bal: BalancedRealization, k: int) -> Blocks:
    """Split the balanced matrices into leading (n-k) and trailing k blocks."""
    n = bal.n
    if not 1 <= k <= n - 1:
        raise BadOrder(f"k must satisfy 1 <= k <= n-1 = {n - 1}, got {k}")
    q = n - k
    A, B, C = bal.sys.A, bal.sys.B, bal.sys.C
    return Blocks(
        A[:q, :q], A[:q, q:], A[q:, :q], A[q:, q:], B[:q], B[q:], C[:, :q], C[:, q:]
    )


def error_bound(hsv, k: int, tol: Tolerances = DEFAULT) -> float:
    """A priori H-infinity bound: 2*theta_{n-k+1} when the k smallest HSVs
    coincide, else twice the tail sum."""
    hsv = np.asarray(hsv, dtype=float)
    n = hsv.shape[0]
    if not 0 <= k <= n:
        raise BadOrder(f"k must be in [0, {n}], got {k}")
    if k == 0:
        return 0.0
    tail = hsv[n - k :]
    if tail.max() - tail.min() <= 1e-12 * hsv[0]:
        return 2.0 * float(tail[0])
    return 2.0 * float(tail.sum())


def _warn_on_split(bal: BalancedRealization, k: int) -> None:
    n = bal.n
    gap = bal.hsv[n - k - 1] - bal.hsv[n - k]
    if gap <= 1e-8 * bal.hsv[0]:
        warnings.warn(
            f"truncation cut between nearly equal HSVs "
            f"(theta_{n - k} = {bal.hsv[n - k - 1]:.6g}, theta_{n - k + 1} = {bal.hsv[n - k]:.6g})",
            SplitAtRepeatedHSVWarning,
            stacklevel=3,
        )


def balanced_truncate(bal: BalancedRealization, k: int) -> ReductionResult:
    """Drop the k least controllable/observable balanced states.

    The result is itself balanced with HSVs theta_1..theta_{n-k}, keeps the
    feedthrough D, and is exact at infinite frequency.
    """
    blocks = partition(bal, k)
    _warn_on_split(bal, k)
    reduced = StateSpace(blocks.A11, blocks.B1, blocks.C1, bal.sys.D)
    return ReductionResult(reduced, "BT", k, np.empty(0), error_bound(bal.hsv, k))


def bspa(bal: BalancedRealization, k: int) -> ReductionResult:
    """Set the k fastest balanced states to quasi-steady state.

    Schur complement form: A_hat = A11 - A12 A22^-1 A21 and the matching
    corrections for B, C, D.  Exact at zero frequency.
    """
    bl = partition(bal, k)
    _warn_on_split(bal, k)
    try:
        lu = scipy.linalg.lu_factor(bl.A22)
        X21 = scipy.linalg.lu_solve(lu, bl.A21)  # A22^-1 A21
        XB2 = scipy.linalg.lu_solve(lu, bl.B2)  # A22^-1 B2
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise SingularA22("trailing block A22 is numerically singular") from exc
    if not (np.all(np.isfinite(X21)) and np.all(np.isfinite(XB2))):
        raise SingularA22("trailing block A22 is numerically singular")
    A_hat = bl.A11 - bl.A12 @ X21
    B_hat = bl.B1 - bl.A12 @ XB2
    C_hat = bl.C1 - bl.C2 @ X21
    D_hat = bal.sys.D - bl.C2 @ XB2
    reduced = StateSpace(A_hat, B_hat, C_hat, D_hat)
    return ReductionResult(reduced, "BSPA", k, np.empty(0), error_bound(bal.hsv, k))


def _interp_step(A, B, C, D, theta_removed: float, eta: float):
    """Remove the last state with knob eta in [0, theta_removed].

    The quasi-steady-state correction terms of the one-state Schur
    complement are scaled by eta/theta_removed: eta = theta_removed is BSPA
    of that state, eta = 0 is truncation (correction vanishes, D kept).
    """
    a22 = A[-1, -1]
    scale = eta / theta_removed
    if scale != 0.0 and abs(a22) < 1e-300:
        raise SingularA22("scalar trailing entry of A is zero")
    if scale == 0.0:
        a22 = 1.0  # correction terms vanish; avoid 0/0
    col = A[:-1, -1]
    row = A[-1, :-1]
    b2 = B[-1]
    c2 = C[:, -1]
    A_new = A[:-1, :-1] - (scale / a22) * np.outer(col, row)
    B_new = B[:-1] - (scale / a22) * np.outer(col, b2)
    C_new = C[:, :-1] - (scale / a22) * np.outer(c2, row)
    D_new = D - (scale / a22) * np.outer(c2, b2)
    return A_new, B_new, C_new, D_new


def interpolated_reduce(bal: BalancedRealization, k: int, eta) -> ReductionResult:
    """Reduce k states with per-state knobs interpolating BT and BSPA.

    ``eta[i]`` pairs with original state n-k+1+i (1-based); states are
    removed one at a time from the last inward, so eta[-1] applies first.
    eta = 0 reproduces balanced_truncate and eta = theta-tail reproduces
    bspa, both to rounding error.
    """
    n = bal.n
    if not 1 <= k <= n - 1:
        raise BadOrder(f"k must satisfy 1 <= k <= n-1 = {n - 1}, got {k}")
    eta = np.asarray(eta, dtype=float)
    if eta.shape != (k,):
        raise EtaOutOfRange(f"eta must have length k = {k}")
    thetas = bal.hsv[n - k :]
    if np.any(eta < 0) or np.any(eta > thetas * (1 + 1e-12)):
        raise EtaOutOfRange("each eta_j must lie in [0, theta of the removed state]")
    _warn_on_split(bal, k)
    A, B, C, D = bal.sys.A, bal.sys.B, bal.sys.C, bal.sys.D
    for i in range(k - 1, -1, -1):
        A, B, C, D = _interp_step(A, B, C, D, thetas[i], eta[i])
    reduced = StateSpace(A, B, C, D)
    return ReductionResult(reduced, "INTERP", k, eta, error_bound(bal.hsv, k))


def error_system(full: StateSpace, reduced: StateSpace) -> StateSpace:
    """Parallel interconnection realizing G - G_r (block-diagonal A,
    stacked B, [C, -C_r] output)."""
    A = scipy.linalg.block_diag(full.A, reduced.A)
    B = np.vstack([full.B, reduced.B])
    C = np.hstack([full.C, -reduced.C])
    D = full.D - reduced.D
    return StateSpace(A, B, C, D)


def verify_bounds(
    sys: StateSpace, k: int, method: str, tol: Tolerances = DEFAULT
) -> tuple[float, float, bool]:
    """Actual H-infinity reduction error vs the a priori bound.

    Returns (actual_error, bound, satisfied).
    """
    if k == 0:
        return 0.0, 0.0, True
    bal = balance(sys, tol)
    if method.upper() == "BT":
        result = balanced_truncate(bal, k)
    elif method.upper() == "BSPA":
        result = bspa(bal, k)
    else:
        raise BadOrder(f"unknown reduction method {method!r}")
    actual, _ = hinf_norm(error_system(sys, result.reduced), tol=tol)
    bound = result.a_priori_bound
    satisfied = actual <= bound + tol.hinf_rel * bound + 1e-12
    return actual, bound, satisfied
