"""Concrete example models and manifold exploration.

Builds the saturable-reaction model, the two-exponential model, and the
two-state frequency-domain model as ``ParamModel`` instances, samples model
manifolds onto grids, and searches the BT<->BSPA interpolation family for
the nearest reduced model to a target data point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .balancing import BalancedRealization
from .balparam import BalancedParams, realize
from .config import DEFAULT, Tolerances
from .errors import BadOrder, BalredError, IntegrationFailure
from .mbam import ParamModel
from .optimize import golden_section_min
from .reduction import balanced_truncate, bspa, interpolated_reduce
from .statespace import StateSpace, atomic_write_text
from .transfer import eval_transfer


def mmr_solution(x0: float, rho1: float, rho2: float, times) -> np.ndarray:
    """Exact solution of dx/dt = -rho1 x / (rho2 + x) at the given times.

    Separation of variables gives the implicit equation
    x0 - x + rho2 log(x0 / x) = rho1 t, which has a unique root in (0, x0]
    (the left side is strictly decreasing in x).  Solved in log-x with
    brentq, which is smooth in the parameters to root tolerance -- crucial
    for the finite-difference sensitivities the geodesic engine uses,
    where adaptive-integrator noise would dominate the second differences.
    """
    out = np.empty(len(times))
    log_x0 = math.log(x0)
    for idx, t in enumerate(times):
        target = rho1 * t
        if target <= 0.0:
            out[idx] = x0
            continue

        def g(u):
            return x0 - math.exp(u) + rho2 * (log_x0 - u) - target

        # g is concave and decreasing, so Newton from the upper bracket
        # u = log x0 (where g <= 0) converges monotonically to the root.
        u = log_x0
        converged = False
        for _ in range(100):
            ex = math.exp(u)
            step = (x0 - ex + rho2 * (log_x0 - u) - target) / (-ex - rho2)
            u -= step
            if abs(step) <= 1e-14 * max(1.0, abs(u)):
                converged = True
                break
        if not converged:
            # Lower bracket chosen so g(u_lo) >= 1 regardless of rho2.
            u_lo = log_x0 - (max(target - x0, 0.0) + 1.0) / max(rho2, 1e-300) - 1.0
            if not np.isfinite(u_lo):
                u_lo = -745.0  # exp underflows; g stays positive via the rho2 term
            u = scipy.optimize.brentq(g, u_lo, log_x0, xtol=1e-14, rtol=8.9e-16)
        out[idx] = math.exp(u)
    return out


def mmr_model(x0: float, times) -> ParamModel:
    """Saturable reaction dx/dt = -rho1 x / (rho2 + x), sampled at ``times``.

    Saturated regime (x >> rho2): linear decay at rate rho1.  Dilute regime
    (rho2 >> x): exponential decay at rate rho1/rho2.  Evaluated through
    the exact implicit solution (see ``mmr_solution``).
    """
    times = np.asarray(times, dtype=float)
    if x0 <= 0:
        raise BalredError("x0 must be positive")
    if times.ndim != 1 or times.shape[0] < 3 or np.any(np.diff(times) <= 0):
        raise BalredError("times must be increasing with at least 3 samples")

    def predict(rho: np.ndarray) -> np.ndarray:
        try:
            return mmr_solution(x0, float(rho[0]), float(rho[1]), times)
        except ValueError as exc:
            raise IntegrationFailure(f"saturable-reaction solve failed at rho = {rho}") from exc

    return ParamModel(
        n_params=2, M=times.shape[0], predict=predict, log_scaled=True, name="mmr"
    )


def two_exp_model(x0, times) -> ParamModel:
    """y(t) = x0_1 exp(-rho1 t) + x0_2 exp(-rho2 t), closed form."""
    x0 = np.asarray(x0, dtype=float)
    times = np.asarray(times, dtype=float)
    if x0.shape != (2,):
        raise BalredError("x0 must be a 2-vector")
    if times.shape[0] < 3:
        raise BalredError("need at least 3 sample times")

    def predict(rho: np.ndarray) -> np.ndarray:
        return x0[0] * np.exp(-rho[0] * times) + x0[1] * np.exp(-rho[1] * times)

    return ParamModel(
        n_params=2, M=times.shape[0], predict=predict, log_scaled=True, name="two-exp"
    )


def response_point(sys: StateSpace, frequencies, mode: str = "magnitude") -> np.ndarray:
    """Data-space representation of a system: its frequency response sampled
    at ``frequencies``, as magnitudes (default) or stacked re/im parts."""
    values = [eval_transfer(sys, 1j * float(w)) for w in np.asarray(frequencies, float)]
    if mode == "magnitude":
        return np.array([np.abs(v).ravel() for v in values]).ravel()
    if mode == "complex":
        flat = np.array([v.ravel() for v in values]).ravel()
        return np.concatenate([flat.real, flat.imag])
    raise BalredError(f"unknown response mode {mode!r}")


def two_state_freq_model(
    theta1: float,
    r1: float,
    beta: float = 1.0,
    gamma: float = 1.0,
    d: float = 0.0,
    frequencies=(0.01, 1.0, 100.0),
    mode: str = "magnitude",
) -> ParamModel:
    """Two-state SISO balanced family with (theta2, r2) free.

    predict(theta2, r2) realizes theta = (theta1, theta2), r = (r1, r2) with
    scalar input/output signs beta, gamma, and returns the sampled frequency
    response as a data-space point.
    """
    freqs = np.asarray(frequencies, dtype=float)
    if freqs.shape[0] < 3:
        raise BalredError("need at least 3 sample frequencies")
    if abs(abs(beta) - 1.0) > 1e-12 or abs(abs(gamma) - 1.0) > 1e-12:
        raise BalredError("scalar beta and gamma must be +-1 for a SISO model")
    M = freqs.shape[0] if mode == "magnitude" else 2 * freqs.shape[0]

    def predict(p: np.ndarray) -> np.ndarray:
        theta2, r2 = float(p[0]), float(p[1])
        params = BalancedParams(
            theta=[theta1, theta2],
            r=[r1, r2],
            beta=[[beta], [beta]],
            gamma=[[gamma, gamma]],
            D=[[d]],
        )
        return response_point(realize(params).sys, freqs, mode)

    return ParamModel(
        n_params=2,
        M=M,
        predict=predict,
        lower=np.array([0.0, 0.0]),
        upper=np.array([theta1, np.inf]),
        log_scaled=True,
        name="two-state",
    )


@dataclass(frozen=True)
class ManifoldSample:
    param_grid: np.ndarray  # (n_points, N)
    data_points: np.ndarray  # (n_points, M)
    sample_spec: np.ndarray  # the times or frequencies used
    tags: tuple[str, ...]
    failures: tuple[dict, ...] = ()


def sample_manifold(model: ParamModel, axes, sample_spec=None, tags=None) -> ManifoldSample:
    """Evaluate ``model`` over the row-major product of per-parameter axes.

    Per-point failures are recorded (parameter point + reason) and dropped
    from the sample rather than aborting the sweep.
    """
    axes = [np.asarray(ax, dtype=float) for ax in axes]
    if len(axes) != model.n_params:
        raise BalredError(f"need {model.n_params} axes, got {len(axes)}")
    points, data, kept_tags, failures = [], [], [], []
    for idx, combo in enumerate(itertools.product(*axes)):
        p = np.asarray(combo, dtype=float)
        tag = tags[idx] if tags is not None else ""
        try:
            y = model(p)
        except BalredError as exc:
            failures.append({"params": p.tolist(), "reason": str(exc)})
            continue
        if not np.all(np.isfinite(y)):
            failures.append({"params": p.tolist(), "reason": "non-finite output"})
            continue
        points.append(p)
        data.append(y)
        kept_tags.append(tag)
    return ManifoldSample(
        np.asarray(points),
        np.asarray(data),
        np.asarray(sample_spec if sample_spec is not None else []),
        tuple(kept_tags),
        tuple(failures),
    )


def export_sample_csv(sample: ManifoldSample, path: str) -> None:
    """CSV with header p_1..p_N, y_1..y_M, tag."""
    N = sample.param_grid.shape[1] if sample.param_grid.size else 0
    M = sample.data_points.shape[1] if sample.data_points.size else 0
    header = [f"p_{i + 1}" for i in range(N)] + [f"y_{i + 1}" for i in range(M)] + ["tag"]
    lines = [",".join(header)]
    for k in range(sample.param_grid.shape[0]):
        row = [repr(float(x)) for x in sample.param_grid[k]]
        row += [repr(float(x)) for x in sample.data_points[k]]
        row.append(sample.tags[k])
        lines.append(",".join(row))
    atomic_write_text(path, "\n".join(lines) + "\n")


@dataclass(frozen=True)
class NearestResult:
    eta_star: float
    distance: float
    bt_distance: float
    bspa_distance: float

    def to_dict(self) -> dict:
        return {
            "eta_star": self.eta_star,
            "distance": self.distance,
            "bt_distance": self.bt_distance,
            "bspa_distance": self.bspa_distance,
        }


def nearest_on_family(
    target,
    bal: BalancedRealization,
    k: int = 1,
    frequencies=(0.01, 1.0, 100.0),
    metric=None,
    mode: str = "magnitude",
    presamples: int = 100,
    tol: Tolerances = DEFAULT,
) -> NearestResult:
    """Closest point to ``target`` along the one-knob BT<->BSPA family.

    Uniform presample over eta in [0, theta_removed] followed by
    golden-section refinement around the best bracket; unimodality is not
    assumed.  The returned distance never exceeds either endpoint's.
    """
    if k != 1:
        raise BadOrder("nearest_on_family searches the single-knob family (k = 1)")
    target = np.asarray(target, dtype=float).ravel()
    if metric is None:
        metric = lambda a, b: float(np.linalg.norm(a - b))

    def dist(eta: float) -> float:
        red = interpolated_reduce(bal, 1, [eta]).reduced
        return metric(response_point(red, frequencies, mode), target)

    theta_rem = float(bal.hsv[-1])
    etas = np.linspace(0.0, theta_rem, presamples + 1)
    dists = np.array([dist(e) for e in etas])
    i = int(np.argmin(dists))
    lo = etas[max(i - 1, 0)]
    hi = etas[min(i + 1, len(etas) - 1)]
    eta_star, d_star = golden_section_min(dist, lo, hi, xtol=1e-10 * max(theta_rem, 1.0))
    bt_distance = metric(response_point(balanced_truncate(bal, 1).reduced, frequencies, mode), target)
    bspa_distance = metric(response_point(bspa(bal, 1).reduced, frequencies, mode), target)
    # Endpoints are in the search interval by construction.
    for eta_cand, d_cand in ((0.0, bt_distance), (theta_rem, bspa_distance)):
        if d_cand < d_star:
            eta_star, d_star = eta_cand, d_cand
    return NearestResult(float(eta_star), float(d_star), float(bt_distance), float(bspa_distance))
