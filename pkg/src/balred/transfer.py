"""Transfer-function evaluation and the H-infinity norm."""

from __future__ import annotations

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import PoleHit, Unstable
from .lyapunov import is_stable
from .optimize import golden_section_min
from .statespace import FrequencyResponse, StateSpace


def eval_transfer(sys: StateSpace, s: complex) -> np.ndarray:
    """G(s) = C (sI - A)^-1 B + D via a complex linear solve (no inverse)."""
    M = s * np.eye(sys.n) - sys.A
    try:
        Z = np.linalg.solve(M, sys.B.astype(complex))
    except np.linalg.LinAlgError as exc:
        raise PoleHit(f"s = {s} is (numerically) a pole of the system") from exc
    if not np.all(np.isfinite(Z)):
        raise PoleHit(f"s = {s} is (numerically) a pole of the system")
    return sys.C @ Z + sys.D


def frequency_response(sys: StateSpace, frequencies) -> FrequencyResponse:
    """eval_transfer at s = i*w, pointwise over the grid."""
    freqs = np.asarray(frequencies, dtype=float)
    values = np.stack([eval_transfer(sys, 1j * w) for w in freqs])
    return FrequencyResponse(freqs, values)


def _sigma_max(sys: StateSpace, w: float) -> float:
    return float(np.linalg.svd(eval_transfer(sys, 1j * w), compute_uv=False)[0])


def hinf_norm(
    sys: StateSpace,
    rel_tol: float | None = None,
    band: tuple[float, float] | None = None,
    tol: Tolerances = DEFAULT,
) -> tuple[float, float]:
    """Peak gain max_w sigma_max(G(iw)) and its frequency.

    Coarse log-spaced grid (scaled to cover the spectrum of A) followed by
    golden-section refinement around the grid maximum.  Accurate to
    ``rel_tol`` for systems whose response peak is resolvable on the grid;
    extremely narrow resonances can be missed (documented limitation).
    ``band`` restricts the search to [w_lo, w_hi] and drops the w = 0 and
    w -> infinity candidates.
    """
    if not is_stable(sys):
        raise Unstable("hinf_norm requires a stable system")
    if rel_tol is None:
        rel_tol = tol.hinf_rel
    eigs = np.abs(np.linalg.eigvals(sys.A))
    if band is None:
        w_lo = 1e-4 * min(1.0, float(eigs.min()))
        w_hi = 1e4 * max(1.0, float(eigs.max()))
    else:
        w_lo, w_hi = float(band[0]), float(band[1])
    grid = np.geomspace(w_lo, w_hi, tol.hinf_grid_points)
    gains = np.array([_sigma_max(sys, w) for w in grid])
    i = int(np.argmax(gains))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    # Refine in log-frequency; xtol chosen so the gain is resolved to rel_tol.
    x, negg = golden_section_min(
        lambda u: -_sigma_max(sys, np.exp(u)),
        np.log(lo),
        np.log(hi),
        xtol=rel_tol / 4,
    )
    best_w, best_g = float(np.exp(x)), -negg
    if best_g < gains[i]:
        best_w, best_g = float(grid[i]), float(gains[i])
    if band is None:
        # Endpoint candidates: DC and the feedthrough at w -> infinity.
        g0 = _sigma_max(sys, 0.0)
        if g0 >= best_g:
            best_w, best_g = 0.0, g0
        ginf = float(np.linalg.svd(sys.D, compute_uv=False)[0]) if sys.D.size else 0.0
        if ginf > best_g:
            best_w, best_g = np.inf, ginf
    return best_g, best_w
