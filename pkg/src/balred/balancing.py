"""Square-root balancing and Hankel singular values."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import BalredError, NotMinimal, Unstable
from .lyapunov import gramians, is_stable
from .statespace import StateSpace


@dataclass(frozen=True)
class BalancedRealization:
    """A StateSpace whose Gramians both equal diag(hsv).

    ``T`` is the change of basis from the source realization: the balanced
    matrices are (T^-1 A T, T^-1 B, C T, D), i.e. ``source.transform(T)``.
    """

    sys: StateSpace
    hsv: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        hsv = np.asarray(self.hsv, dtype=float)
        T = np.asarray(self.T, dtype=float)
        if hsv.ndim != 1 or hsv.shape[0] != self.sys.n:
            raise BalredError("hsv must be a length-n vector")
        if np.any(hsv <= 0):
            raise BalredError("Hankel singular values must be strictly positive")
        if np.any(np.diff(hsv) > 0):
            raise BalredError("Hankel singular values must be non-increasing")
        if T.shape != (self.sys.n, self.sys.n):
            raise BalredError("T must be n x n")
        hsv.setflags(write=False)
        T.setflags(write=False)
        object.__setattr__(self, "hsv", hsv)
        object.__setattr__(self, "T", T)

    @property
    def n(self) -> int:
        return self.sys.n

    def lyapunov_residuals(self) -> tuple[float, float]:
        """Frobenius residuals of the two Gramian equations with X = diag(hsv)."""
        A, B, C = self.sys.A, self.sys.B, self.sys.C
        X = np.diag(self.hsv)
        r_obs = np.linalg.norm(A.T @ X + X @ A + C.T @ C, "fro")
        r_ctr = np.linalg.norm(A @ X + X @ A.T + B @ B.T, "fro")
        return r_obs, r_ctr


def balance(sys: StateSpace, tol: Tolerances = DEFAULT) -> BalancedRealization:
    """Balance a stable minimal system by the square-root method.

    Cholesky P = L L^T, eigendecomposition L^T Qo L = U S^2 U^T, then
    T = L U S^(-1/2) maps the input onto the balanced basis.
    """
    if not is_stable(sys):
        raise Unstable("balance requires a Hurwitz A matrix")
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        try:
            P, Qo = gramians(sys, tol)
        except Warning as w:
            raise NotMinimal(str(w)) from None
    try:
        L = np.linalg.cholesky(P)
    except np.linalg.LinAlgError as exc:
        raise NotMinimal("controllability Gramian not positive definite") from exc
    M = L.T @ Qo @ L
    M = 0.5 * (M + M.T)
    w, U = np.linalg.eigh(M)
    order = np.argsort(w)[::-1]
    w = w[order]
    U = U[:, order]
    if w[-1] <= 0:
        raise NotMinimal("observability Gramian not positive definite on range of L")
    hsv = np.sqrt(w)
    T = L @ U @ np.diag(hsv**-0.5)
    return BalancedRealization(sys.transform(T), hsv, T)


def hankel_singular_values(sys: StateSpace, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Non-increasing positive vector; square roots of eig(P Qo)."""
    return balance(sys, tol).hsv
