"""Geodesics on the model manifold: sensitivities, Fisher information,
initial-direction selection, integration, and limit classification.

A ``ParamModel`` is a black box mapping a parameter vector p in R^N to a
sampled output vector y in R^M (M > N).  Geodesics of the embedding metric
J^T J are integrated in "working coordinates": log p_i for parameters
flagged log_scaled, p_i otherwise.  That maps the 0/infinity boundaries of
positive parameters to -/+ infinity and makes divergence detection
symmetric.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.integrate
import scipy.optimize

from .config import DEFAULT, Tolerances
from .errors import (
    BalredError,
    DegenerateFIMWarning,
    DomainViolation,
    Inconclusive,
    SingularFIM,
)
from .statespace import atomic_write_text

# Step for central second differences: balancing 4*eps/h^2 roundoff against
# h^2/12 truncation gives h ~ eps^(1/4).
_H_SECOND = float(np.finfo(float).eps) ** 0.25


@dataclass(frozen=True)
class ParamModel:
    """Deterministic map from parameters to a sampled output vector."""

    n_params: int
    M: int
    predict: Callable[[np.ndarray], np.ndarray]
    lower: np.ndarray = None  # per-parameter open lower bounds
    upper: np.ndarray = None
    log_scaled: np.ndarray = None  # per-parameter booleans
    name: str = ""

    def __post_init__(self):
        if self.M <= self.n_params:
            raise BalredError("need more samples than parameters (M > N)")
        lower = np.zeros(self.n_params) if self.lower is None else np.asarray(self.lower, float)
        upper = (
            np.full(self.n_params, np.inf)
            if self.upper is None
            else np.asarray(self.upper, float)
        )
        log_scaled = (
            np.zeros(self.n_params, dtype=bool)
            if self.log_scaled is None
            else np.broadcast_to(np.asarray(self.log_scaled, dtype=bool), (self.n_params,)).copy()
        )
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "log_scaled", log_scaled)
        object.__setattr__(self, "_memo", {})

    def __call__(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        key = p.tobytes()
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        y = np.asarray(self.predict(p), dtype=float).ravel()
        if y.shape != (self.M,):
            raise BalredError(f"predict returned {y.shape}, expected ({self.M},)")
        # predict is deterministic, so memoize; geodesic integration revisits
        # points heavily (jacobian stencils, rejected steps, chunk retries).
        if len(self._memo) > 4096:
            self._memo.clear()
        self._memo[key] = y
        return y

    # -- working (possibly log) coordinates -------------------------------
    def to_working(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        q = p.copy()
        q[self.log_scaled] = np.log(p[self.log_scaled])
        return q

    def from_working(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        p = q.copy()
        p[self.log_scaled] = np.exp(q[self.log_scaled])
        return p

    def check_domain(self, p) -> None:
        p = np.asarray(p, dtype=float)
        if np.any(p <= self.lower) or np.any(p >= self.upper):
            raise DomainViolation(f"parameter point {p} outside the open domain")


def _steps(model: ParamModel, q: np.ndarray) -> np.ndarray:
    h = np.empty(model.n_params)
    for l in range(model.n_params):
        if model.log_scaled[l]:
            h[l] = max(1e-6 * abs(q[l]), 1e-6)
        else:
            h[l] = max(1e-6 * abs(q[l]), 1e-8)
    return h


def jacobian(model: ParamModel, p, steps=None) -> np.ndarray:
    """Central-difference M x N sensitivity matrix in working coordinates
    (d y / d log p_l for log-scaled parameters, d y / d p_l otherwise)."""
    q = model.to_working(p)
    return _jacobian_working(model, q, steps)


def _jacobian_working(model: ParamModel, q: np.ndarray, steps=None) -> np.ndarray:
    h = _steps(model, q) if steps is None else np.asarray(steps, float)
    cols = []
    for l in range(model.n_params):
        qp, qm = q.copy(), q.copy()
        qp[l] += h[l]
        qm[l] -= h[l]
        pp, pm = model.from_working(qp), model.from_working(qm)
        model.check_domain(pp)
        model.check_domain(pm)
        cols.append((model(pp) - model(pm)) / (2.0 * h[l]))
    return np.column_stack(cols)


def fim(J: np.ndarray, weights=None) -> np.ndarray:
    """Fisher information J^T W J; unit measurement covariance by default."""
    J = np.asarray(J, dtype=float)
    if weights is not None:
        J = J * np.sqrt(np.asarray(weights, float))[:, None]
    I = J.T @ J
    return 0.5 * (I + I.T)


def _acceleration_working(
    model: ParamModel,
    q: np.ndarray,
    v: np.ndarray,
    tol: Tolerances = DEFAULT,
    regularize: bool = False,
) -> np.ndarray:
    """a = -I^-1 J^T w with w the second directional derivative of y along v.

    Avoids materializing the full Christoffel tensor.  Standard geodesic
    sign (validated by the constant data-space speed invariant).  With
    ``regularize`` the FIM spectrum is clamped at condition
    ``fim_condition_max`` instead of raising, which keeps the geodesic
    right-hand side finite for integrator trial steps near a boundary;
    the condition-number termination event stops the run there anyway.
    """
    J = _jacobian_working(model, q)
    I = fim(J)
    eigs, vecs = np.linalg.eigh(I)
    singular = eigs[0] <= 0 or eigs[-1] / eigs[0] > tol.fim_condition_max
    if singular and not regularize:
        raise SingularFIM(
            f"FIM condition number exceeds {tol.fim_condition_max:.0e}; "
            "geodesic has reached a boundary"
        )
    vnorm = float(np.linalg.norm(v))
    if vnorm == 0.0:
        return np.zeros_like(q)
    h = _H_SECOND * max(1.0, float(np.linalg.norm(q))) / vnorm
    y0 = model(model.from_working(q))
    yp = model(model.from_working(q + h * v))
    ym = model(model.from_working(q - h * v))
    w = (yp - 2.0 * y0 + ym) / h**2
    rhs_vec = J.T @ w
    if singular:
        clamped = np.maximum(eigs, eigs[-1] / tol.fim_condition_max)
        return -vecs @ ((vecs.T @ rhs_vec) / clamped)
    return -np.linalg.solve(I, rhs_vec)


def geodesic_acceleration(model: ParamModel, p, v, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Geodesic acceleration at natural parameters p with working-coordinate
    velocity v."""
    return _acceleration_working(model, model.to_working(p), np.asarray(v, float), tol)


def initial_velocity(model: ParamModel, p0, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Unit eigenvector of the smallest FIM eigenvalue, oriented so the
    initial motion accelerates forward (sum_i v_i a_i >= 0)."""
    q0 = model.to_working(p0)
    J = _jacobian_working(model, q0)
    I = fim(J)
    eigs, vecs = np.linalg.eigh(I)
    scale = max(eigs[-1], 1e-300)
    if eigs.shape[0] > 1 and (eigs[0] <= 1e-14 * scale or eigs[1] / max(eigs[0], 1e-300) < 10.0):
        warnings.warn(
            "smallest FIM eigenvalue not well separated; "
            "using lexicographically-first eigenvector as tie-break",
            DegenerateFIMWarning,
            stacklevel=2,
        )
    v = vecs[:, 0]
    nz = np.nonzero(np.abs(v) > 1e-12)[0]
    if nz.size and v[nz[0]] < 0:
        v = -v
    v = v / np.linalg.norm(v)
    a = _acceleration_working(model, q0, v, tol)
    if float(v @ a) < 0.0:
        v = -v
    return v


@dataclass
class GeodesicOptions:
    tau_max: float = 25.0
    n_samples: int = 200
    rtol: float = DEFAULT.geodesic_rtol
    atol: float = DEFAULT.geodesic_atol
    log10_bound: float = DEFAULT.log10_param_bound
    velocity_blowup: float = DEFAULT.velocity_blowup
    fim_condition_max: float = DEFAULT.fim_condition_max
    v0: np.ndarray | None = None  # working-coordinate initial velocity
    direction: int = +1


@dataclass
class GeodesicTrace:
    """Time-stamped samples of a geodesic plus its termination cause."""

    taus: np.ndarray
    params: np.ndarray  # natural coordinates, shape (n_samples, N)
    velocities: np.ndarray  # dp/dtau in natural coordinates
    data_points: np.ndarray  # y(p(tau)), shape (n_samples, M)
    data_speeds: np.ndarray  # ||J dq/dtau|| per sample (embedding speed)
    termination: str  # ParamDiverged | VelocityBlowup | MaxTau | StepFailure | FimSingular
    model: ParamModel


def run_geodesic(model: ParamModel, p0, options: GeodesicOptions | None = None) -> GeodesicTrace:
    """Integrate the geodesic ODE from p0 until a boundary signature appears.

    The second-order system (dq/dtau = v, dv/dtau = acceleration) is
    integrated with adaptive RK45 after reparameterizing by parameter-space
    arc length s.  Geodesic acceleration is quadratic in the velocity, so
    with u = v/|v| the state (q, u, log |v|, tau) obeys

        dq/ds = u,   du/ds = a(q, u) - u (u . a(q, u)),
        d log|v|/ds = u . a(q, u),   dtau/ds = 1/|v|,

    which stays bounded even where v blows up in finite tau near a
    manifold boundary.  The same geodesic path is traced, just on a
    well-conditioned clock.  Terminal events stop the run on parameter
    log-excursion, velocity blowup, FIM condition blowup, or tau_max.
    """
    opts = options or GeodesicOptions()
    model.check_domain(p0)
    q0 = model.to_working(p0)
    if opts.v0 is not None:
        v0 = np.asarray(opts.v0, dtype=float)
    else:
        v0 = initial_velocity(model, p0)
    v0 = float(opts.direction) * v0
    v0_norm_ref = float(np.linalg.norm(v0))
    N = model.n_params

    def record(tau, q, v):
        p = model.from_working(q)
        dpdtau = v.copy()
        dpdtau[model.log_scaled] = p[model.log_scaled] * v[model.log_scaled]
        J = _jacobian_working(model, q)
        taus.append(tau)
        params.append(p)
        velocities.append(dpdtau)
        data_points.append(model(p))
        data_speeds.append(float(np.linalg.norm(J @ v)))

    taus: list[float] = []
    params: list[np.ndarray] = []
    velocities: list[np.ndarray] = []
    data_points: list[np.ndarray] = []
    data_speeds: list[float] = []

    record(0.0, q0, v0)
    if v0_norm_ref == 0.0 or opts.tau_max <= 0.0:
        return _finish(taus, params, velocities, data_points, data_speeds, "MaxTau", model)

    def rhs(_s, z):
        q, u = z[:N], z[N : 2 * N]
        u = u / np.linalg.norm(u)
        a = _acceleration_working(model, q, u, regularize=True)
        proj = float(u @ a)
        return np.concatenate([u, a - proj * u, [proj, math.exp(-z[2 * N])]])

    def _excursion(q: np.ndarray) -> float:
        exc = np.abs((q - q0)[model.log_scaled]) / math.log(10.0)
        worst = float(exc.max()) if exc.size else 0.0
        lin = ~model.log_scaled
        if lin.any():
            p = model.from_working(q)[lin]
            p_start = model.from_working(q0)[lin]
            with np.errstate(divide="ignore", invalid="ignore"):
                lin_exc = np.abs(np.log10(np.abs(p) / np.maximum(np.abs(p_start), 1e-300)))
            worst = max(worst, float(np.nanmax(lin_exc, initial=0.0)))
        return worst

    # Terminal events let the integrator locate the stopping point itself;
    # each returns > 0 while the run should continue.
    def ev_fim(_s, z):
        J = _jacobian_working(model, z[:N])
        eigs = np.linalg.eigvalsh(fim(J))
        cond = eigs[-1] / max(eigs[0], 1e-300)
        return math.log(opts.fim_condition_max) - math.log(max(cond, 1e-300))

    def ev_excursion(_s, z):
        return opts.log10_bound - _excursion(z[:N])

    def ev_speed(_s, z):
        return math.log(opts.velocity_blowup) + math.log(v0_norm_ref) - z[2 * N]

    def ev_tau(_s, z):
        return opts.tau_max - z[2 * N + 1]

    events = (ev_fim, ev_excursion, ev_speed, ev_tau)
    for ev in events:
        ev.terminal = True
    event_labels = ("FimSingular", "ParamDiverged", "VelocityBlowup", "MaxTau")

    def unpack(z):
        lnv = z[2 * N]
        return z[:N], z[N : 2 * N] * math.exp(lnv), float(z[2 * N + 1])

    z = np.concatenate([q0, v0 / v0_norm_ref, [math.log(v0_norm_ref), 0.0]])
    # Quarter-decade arc-length chunks: each chunk end contributes one trace
    # sample, so divergence legs are sampled ~9 points per decade.
    ds = math.log(10.0) / 4.0
    ds_chunk = ds
    termination = "StepFailure"
    s = 0.0
    for _ in range(20 * max(opts.n_samples, 1)):
        try:
            sol = scipy.integrate.solve_ivp(
                rhs,
                (s, s + ds_chunk),
                z,
                method="RK45",
                rtol=opts.rtol,
                atol=opts.atol,
                events=events,
            )
        except (SingularFIM, DomainViolation, BalredError):
            # A trial step left the model domain (the termination events
            # normally fire first).  Shrink the chunk and retry from the
            # last good state so the trace approaches the boundary.
            ds_chunk *= 0.5
            if ds_chunk < 1e-9 * ds:
                termination = "ParamDiverged"
                break
            continue
        if not sol.success and sol.status != 1:
            termination = "StepFailure"
            break
        if sol.status == 1:  # a terminal event fired
            for label, t_ev, y_ev in zip(event_labels, sol.t_events, sol.y_events):
                if len(t_ev):
                    termination = label
                    z = np.asarray(y_ev[0])
                    break
            q, v, tau = unpack(z)
            try:
                record(tau, q, v)
            except BalredError:
                pass  # boundary state itself not evaluable; keep prior samples
            break
        ds_chunk = min(2.0 * ds_chunk, ds)
        s = float(sol.t[-1])
        z = sol.y[:, -1]
        q, v, tau = unpack(z)
        try:
            record(tau, q, v)
        except BalredError:
            termination = "ParamDiverged"
            break
    return _finish(taus, params, velocities, data_points, data_speeds, termination, model)


def _finish(taus, params, velocities, data_points, data_speeds, termination, model):
    return GeodesicTrace(
        np.asarray(taus),
        np.asarray(params),
        np.asarray(velocities),
        np.asarray(data_points),
        np.asarray(data_speeds),
        termination,
        model,
    )


@dataclass(frozen=True)
class LimitClassification:
    tags: tuple[str, ...]  # per-parameter: ToZero | ToInfinity | Finite
    invariants: tuple[dict, ...]  # candidate invariant ratios between parameters

    def to_dict(self) -> dict:
        return {"tags": list(self.tags), "invariants": [dict(d) for d in self.invariants]}


def classify_limit(
    trace: GeodesicTrace,
    zero_factor: float = DEFAULT.to_zero_factor,
    infinity_factor: float = DEFAULT.to_infinity_factor,
) -> LimitClassification:
    """Tag each parameter ToZero / ToInfinity / Finite at the trace end and
    report converging log-ratios between co-diverging parameters."""
    if trace.params.shape[0] < 3:
        raise Inconclusive("trace too short to classify")
    # magnitudes: linear-coordinate parameters that merely change sign must
    # read as Finite, not ToZero
    start = np.abs(trace.params[0])
    final = np.abs(trace.params[-1])
    mid = np.abs(trace.params[int(0.8 * (trace.params.shape[0] - 1))])
    if trace.termination == "MaxTau":
        if not (np.any(final < zero_factor * start) or np.any(final > infinity_factor * start)):
            raise Inconclusive("trace ended on tau_max with no parameter divergence")
    tags = []
    for i in range(start.shape[0]):
        if final[i] < zero_factor * start[i] and final[i] <= mid[i]:
            tags.append("ToZero")
        elif final[i] > infinity_factor * start[i] and final[i] >= mid[i]:
            tags.append("ToInfinity")
        else:
            tags.append("Finite")
    invariants = []
    window = np.abs(trace.params[int(0.8 * trace.params.shape[0]) :])
    for i in range(len(tags)):
        for j in range(i + 1, len(tags)):
            if tags[i] == tags[j] and tags[i] in ("ToZero", "ToInfinity"):
                log_ratio = np.log(window[:, i]) - np.log(window[:, j])
                drift = float(log_ratio.max() - log_ratio.min())
                if drift < 0.01:
                    invariants.append(
                        {
                            "i": i,
                            "j": j,
                            "ratio": float(np.exp(log_ratio.mean())),
                            "drift": drift,
                        }
                    )
    return LimitClassification(tuple(tags), tuple(invariants))


@dataclass(frozen=True)
class FitResult:
    params: np.ndarray
    residual_norm: float
    grad_norm: float
    converged: bool
    n_evals: int


def refit_reduced(model_reduced: ParamModel, target_y, p_init, max_iter: int = 500) -> FitResult:
    """Least-squares fit of a reduced model to target data.

    Levenberg-Marquardt in working coordinates (log for positive
    parameters, which also removes the bound constraints).  Reports
    non-convergence via the ``converged`` flag rather than raising.
    """
    target = np.asarray(target_y, dtype=float).ravel()
    if target.shape != (model_reduced.M,):
        raise BalredError(f"target_y must have length {model_reduced.M}")
    q0 = model_reduced.to_working(p_init)

    def residual(q):
        return model_reduced(model_reduced.from_working(q)) - target

    result = scipy.optimize.least_squares(
        residual, q0, method="lm", xtol=1e-12, ftol=1e-12, gtol=1e-12, max_nfev=max_iter * (len(q0) + 1)
    )
    grad_norm = float(np.linalg.norm(result.grad, np.inf)) if result.grad is not None else np.inf
    converged = grad_norm <= 1e-8 or result.cost <= 1e-24
    return FitResult(
        model_reduced.from_working(result.x),
        float(np.linalg.norm(result.fun)),
        grad_norm,
        bool(converged),
        int(result.nfev),
    )


def export_trace_csv(trace: GeodesicTrace, path: str) -> None:
    """CSV with header tau, p_1..p_N, v_1..v_N, y_1..y_M."""
    N = trace.params.shape[1] if trace.params.size else 0
    M = trace.data_points.shape[1] if trace.data_points.size else 0
    lines = []
    header = (
        ["tau"]
        + [f"p_{i + 1}" for i in range(N)]
        + [f"v_{i + 1}" for i in range(N)]
        + [f"y_{i + 1}" for i in range(M)]
    )
    lines.append(",".join(header))
    for k in range(trace.taus.shape[0]):
        row = (
            [repr(float(trace.taus[k]))]
            + [repr(float(x)) for x in trace.params[k]]
            + [repr(float(x)) for x in trace.velocities[k]]
            + [repr(float(x)) for x in trace.data_points[k]]
        )
        lines.append(",".join(row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def export_classification_json(trace: GeodesicTrace, path: str, **classify_kwargs) -> dict:
    """JSON sidecar with the termination cause and limit classification."""
    payload = {"termination": trace.termination}
    try:
        payload["classification"] = classify_limit(trace, **classify_kwargs).to_dict()
    except Inconclusive as exc:
        payload["classification"] = None
        payload["inconclusive"] = str(exc)
    atomic_write_text(path, json.dumps(payload, indent=2) + "\n")
    return payload
