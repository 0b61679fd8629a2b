"""The identifiable/structural parameterization of balanced realizations.

A balanced realization with distinct Hankel singular values is specified by
(theta, r, beta, gamma, D): theta are the HSVs, r_i^2 the common diagonals
of B B^T and C^T C, beta/gamma the unit input/output direction vectors, and
D the feedthrough.  ``realize`` builds the matrices from the parameters and
``extract_params`` inverts it.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .balancing import BalancedRealization
from .config import DEFAULT, Tolerances
from .errors import (
    BalredError,
    DegenerateHSV,
    NotBalanced,
    UnstableRealizationWarning,
    ZeroRow,
)
from .lyapunov import is_stable
from .statespace import StateSpace, atomic_write_text


@dataclass(frozen=True)
class BalancedParams:
    """(theta, r, beta, gamma, D) with unit-norm beta rows and gamma columns."""

    theta: np.ndarray  # (n,) strictly decreasing, positive
    r: np.ndarray  # (n,) positive
    beta: np.ndarray  # (n, m), rows unit norm
    gamma: np.ndarray  # (p, n), columns unit norm
    D: np.ndarray  # (p, m)

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        r = np.asarray(self.r, dtype=float)
        beta = np.atleast_2d(np.asarray(self.beta, dtype=float))
        gamma = np.atleast_2d(np.asarray(self.gamma, dtype=float))
        D = np.atleast_2d(np.asarray(self.D, dtype=float))
        n = theta.shape[0]
        if theta.ndim != 1 or r.shape != (n,):
            raise BalredError("theta and r must be vectors of equal length")
        if np.any(theta <= 0):
            raise BalredError("theta must be strictly positive")
        if np.any(np.diff(theta) >= -1e-12 * theta[0]):
            raise DegenerateHSV("theta must be strictly decreasing with separated entries")
        if np.any(r <= 0):
            raise BalredError("r must be strictly positive")
        if beta.shape[0] != n or gamma.shape[1] != n:
            raise BalredError("beta must be n x m and gamma p x n")
        if D.shape != (gamma.shape[0], beta.shape[1]):
            raise BalredError("D must be p x m")
        if np.any(np.abs(np.linalg.norm(beta, axis=1) - 1.0) > 1e-12):
            raise BalredError("rows of beta must have unit norm")
        if np.any(np.abs(np.linalg.norm(gamma, axis=0) - 1.0) > 1e-12):
            raise BalredError("columns of gamma must have unit norm")
        for name, arr in (("theta", theta), ("r", r), ("beta", beta), ("gamma", gamma), ("D", D)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.theta.shape[0]

    def to_dict(self) -> dict:
        return {
            "theta": self.theta.tolist(),
            "r": self.r.tolist(),
            "beta": self.beta.tolist(),
            "gamma": self.gamma.tolist(),
            "D": self.D.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BalancedParams":
        missing = [k for k in ("theta", "r", "beta", "gamma", "D") if k not in data]
        if missing:
            raise BalredError(f"balanced-params JSON missing key(s): {', '.join(missing)}")
        return cls(data["theta"], data["r"], data["beta"], data["gamma"], data["D"])

    def save(self, path: str) -> None:
        atomic_write_text(path, json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str) -> "BalancedParams":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def alpha(i: int, j: int, params: BalancedParams, tol: Tolerances = DEFAULT) -> float:
    """Off-diagonal coupling coefficient of the balanced A matrix.

    alpha_ij = (theta_j <beta_i, beta_j> - theta_i <gamma_i, gamma_j>)
               / (theta_i^2 - theta_j^2),  i != j.
    """
    if i == j:
        raise BalredError("alpha is defined for i != j only")
    th = params.theta
    denom = th[i] ** 2 - th[j] ** 2
    if abs(denom) < tol.hsv_degenerate * th[0] ** 2:
        raise DegenerateHSV(f"theta_{i} and theta_{j} too close for the alpha formula")
    bb = float(params.beta[i] @ params.beta[j])
    gg = float(params.gamma[:, i] @ params.gamma[:, j])
    return (th[j] * bb - th[i] * gg) / denom


def realize(params: BalancedParams, tol: Tolerances = DEFAULT) -> BalancedRealization:
    """Build the balanced realization from (theta, r, beta, gamma, D).

    A_ii = -r_i^2 / (2 theta_i), A_ij = r_i r_j alpha_ij, B rows r_i beta_i,
    C columns r_i gamma_i.  The result satisfies both Gramian equations with
    X = diag(theta) by construction; stability is checked and reported via
    UnstableRealizationWarning, not assumed.
    """
    n = params.n
    th, r = params.theta, params.r
    A = np.diag(-(r**2) / (2.0 * th))
    for i in range(n):
        for j in range(n):
            if i != j:
                A[i, j] = r[i] * r[j] * alpha(i, j, params, tol)
    B = r[:, None] * params.beta
    C = params.gamma * r[None, :]
    sys = StateSpace(A, B, C, params.D)
    if not is_stable(sys):
        warnings.warn(
            "realized balanced system is not Hurwitz for these parameters",
            UnstableRealizationWarning,
            stacklevel=2,
        )
    return BalancedRealization(sys, th, np.eye(n))


def check_lemma1(bal: BalancedRealization) -> float:
    """Max absolute deviation of diag(B B^T) from diag(C^T C)."""
    B, C = bal.sys.B, bal.sys.C
    return float(np.max(np.abs(np.sum(B * B, axis=1) - np.sum(C * C, axis=0))))


def extract_params(bal: BalancedRealization, tol: Tolerances = DEFAULT) -> BalancedParams:
    """Invert ``realize`` on a balanced realization with distinct HSVs.

    Gauge fixing: the first nonzero entry of each beta row is made
    nonnegative; gamma absorbs the sign flip (a diag(+-1) similarity, so
    the frequency response is unchanged).
    """
    B, C = bal.sys.B, bal.sys.C
    diag_b = np.sum(B * B, axis=1)
    scale = max(float(np.max(diag_b)), float(np.max(np.sum(C * C, axis=0))), 1.0)
    if check_lemma1(bal) > tol.lemma1_rel * scale:
        raise NotBalanced(
            "diag(B B^T) != diag(C^T C); input is not a balanced realization"
        )
    if np.any(diag_b <= 1e-24 * scale):
        raise ZeroRow("a row of B has ~zero norm; system is not minimal")
    r = np.sqrt(diag_b)
    beta = B / r[:, None]
    gamma = C / r[None, :]
    for i in range(bal.n):
        row = beta[i]
        nz = np.nonzero(np.abs(row) > 1e-12)[0]
        if nz.size and row[nz[0]] < 0:
            beta[i] = -beta[i]
            gamma[:, i] = -gamma[:, i]
    # Renormalize away rounding in the unit-norm invariant.
    beta = beta / np.linalg.norm(beta, axis=1)[:, None]
    gamma = gamma / np.linalg.norm(gamma, axis=0)[None, :]
    return BalancedParams(bal.hsv, r, beta, gamma, bal.sys.D)


CENSUS_KINDS = ("transfer_function", "transfer_function_rank1", "state_space", "balanced_state_space")


@dataclass(frozen=True)
class ParamCensus:
    """Identifiable / structural / conditionally identifiable parameter counts."""

    identifiable: int
    structural: int
    conditionally_identifiable: int

    @property
    def total(self) -> int:
        return self.identifiable + self.structural + self.conditionally_identifiable


def param_census(kind: str, n_or_N: int, m: int, p: int) -> ParamCensus:
    """Parameter counts for the four model-class parameterizations.

    transfer_function:        N p m + N + p m identifiable (common-denominator
                              coefficient form).
    transfer_function_rank1:  N p + N m + p m identifiable (partial fractions
                              with rank-one residues / distinct poles).
    state_space:              n^2 + n m + n p conditionally identifiable
                              (A, B, C entries; they change under a state
                              transformation) plus p m identifiable (D).
    balanced_state_space:     n m + n p + p m identifiable, n^2 structural
                              (the transformation from the balanced basis).
    """
    N = n_or_N
    if N <= 0 or m <= 0 or p <= 0:
        raise BalredError("dimensions must be positive")
    if kind == "transfer_function":
        return ParamCensus(N * p * m + N + p * m, 0, 0)
    if kind == "transfer_function_rank1":
        return ParamCensus(N * p + N * m + p * m, 0, 0)
    if kind == "state_space":
        return ParamCensus(p * m, 0, N * N + N * m + N * p)
    if kind == "balanced_state_space":
        return ParamCensus(N * m + N * p + p * m, N * N, 0)
    raise BalredError(f"unknown census kind {kind!r}; expected one of {CENSUS_KINDS}")
