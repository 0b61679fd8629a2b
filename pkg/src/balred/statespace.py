"""State-space containers, JSON interchange, and random test systems."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .errors import BalredError


def _as_matrix(M, name: str) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(M, dtype=float))
    if arr.ndim != 2:
        raise BalredError(f"{name} must be a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise BalredError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class StateSpace:
    """Continuous-time LTI system dx/dt = A x + B u, y = C x + D u."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        A = _as_matrix(self.A, "A")
        B = _as_matrix(self.B, "B")
        C = _as_matrix(self.C, "C")
        D = _as_matrix(self.D, "D")
        n = A.shape[0]
        if A.shape != (n, n):
            raise BalredError(f"A must be square, got {A.shape}")
        if B.shape[0] != n:
            raise BalredError(f"B has {B.shape[0]} rows, expected {n}")
        if C.shape[1] != n:
            raise BalredError(f"C has {C.shape[1]} columns, expected {n}")
        if D.shape != (C.shape[0], B.shape[1]):
            raise BalredError(f"D must be {C.shape[0]}x{B.shape[1]}, got {D.shape}")
        for name, arr in (("A", A), ("B", B), ("C", C), ("D", D)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]

    def transform(self, T: np.ndarray) -> "StateSpace":
        """Change of state basis x = T x_new.

        Returns the system (T^-1 A T, T^-1 B, C T, D).  This is the
        convention used throughout the library: ``balance`` returns a T
        such that ``sys.transform(T)`` is the balanced realization.
        """
        T = _as_matrix(T, "T")
        Tinv = np.linalg.inv(T)
        return StateSpace(Tinv @ self.A @ T, Tinv @ self.B, self.C @ T, self.D)

    def to_dict(self) -> dict:
        return {
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "C": self.C.tolist(),
            "D": self.D.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StateSpace":
        missing = [k for k in ("A", "B", "C", "D") if k not in data]
        if missing:
            raise BalredError(f"state-space JSON missing key(s): {', '.join(missing)}")
        return cls(data["A"], data["B"], data["C"], data["D"])

    def save(self, path: str) -> None:
        atomic_write_text(path, json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str) -> "StateSpace":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise BalredError(f"invalid JSON in {path}: {exc}") from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class FrequencyResponse:
    """Samples of G(i w) on a strictly increasing frequency grid (rad/s)."""

    frequencies: np.ndarray
    values: np.ndarray  # shape (len(frequencies), p, m), complex

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=float)
        vals = np.asarray(self.values, dtype=complex)
        if freqs.ndim != 1:
            raise BalredError("frequencies must be a 1-D vector")
        if np.any(np.diff(freqs) <= 0):
            raise BalredError("frequencies must be strictly increasing")
        if vals.shape[0] != freqs.shape[0] or vals.ndim != 3:
            raise BalredError("values must have shape (len(frequencies), p, m)")
        freqs.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "values", vals)


def atomic_write_text(path: str, text: str) -> None:
    """Write via temp file + rename so partial runs never corrupt artifacts."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def random_stable_system(
    n: int,
    m: int = 1,
    p: int = 1,
    rng: np.random.Generator | None = None,
    min_gramian_ratio: float = 1e-6,
) -> StateSpace:
    """Random Hurwitz, almost-surely minimal system for tests and sweeps.

    Draws are retried until both Gramians are comfortably full rank so the
    result is safe to balance.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    from .lyapunov import gramians  # local import to avoid a cycle

    for _ in range(50):
        A0 = rng.standard_normal((n, n))
        shift = max(np.max(np.real(np.linalg.eigvals(A0))), 0.0) + 0.5 + rng.uniform(0.0, 1.0)
        A = A0 - shift * np.eye(n)
        B = rng.standard_normal((n, m))
        C = rng.standard_normal((p, n))
        D = rng.standard_normal((p, m))
        sys = StateSpace(A, B, C, D)
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            try:
                P, Qo = gramians(sys)
            except BalredError:
                continue
        ok = True
        for G in (P, Qo):
            w = np.linalg.eigvalsh(G)
            if w[0] <= min_gramian_ratio * w[-1]:
                ok = False
        if ok:
            return sys
    raise BalredError("failed to draw a well-conditioned stable minimal system")
