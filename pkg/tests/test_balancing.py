import numpy as np
import pytest

from balred import (
    StateSpace,
    balance,
    gramians,
    hankel_singular_values,
    random_stable_system,
)
from balred.balancing import BalancedRealization
from balred.errors import BalredError, NotMinimal, Unstable


def test_balance_diagonalizes_gramians(rng):
    for _ in range(10):
        n = int(rng.integers(2, 8))
        sys = random_stable_system(n, 2, 2, rng)
        bal = balance(sys)
        P, Qo = gramians(bal.sys)
        X = np.diag(bal.hsv)
        scale = bal.hsv[0]
        assert np.linalg.norm(P - X, "fro") < 1e-8 * max(1.0, scale)
        assert np.linalg.norm(Qo - X, "fro") < 1e-8 * max(1.0, scale)
        r_obs, r_ctr = bal.lyapunov_residuals()
        assert r_obs < 1e-8 * max(1.0, np.linalg.norm(bal.sys.C) ** 2)
        assert r_ctr < 1e-8 * max(1.0, np.linalg.norm(bal.sys.B) ** 2)


def test_hsv_ordering_and_transform(rng):
    sys = random_stable_system(5, 1, 1, rng)
    bal = balance(sys)
    assert np.all(np.diff(bal.hsv) <= 0)
    assert np.all(bal.hsv > 0)
    # T maps the source onto the balanced realization
    mapped = sys.transform(bal.T)
    assert np.allclose(mapped.A, bal.sys.A, atol=1e-10)
    assert np.allclose(mapped.B, bal.sys.B, atol=1e-10)
    assert np.allclose(mapped.C, bal.sys.C, atol=1e-10)


def test_gramian_congruence(rng):
    # under x = T x_new, P maps to T^-1 P T^-T and Qo to T^T Qo T
    sys = random_stable_system(4, 2, 1, rng)
    P, Qo = gramians(sys)
    T = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    sys2 = sys.transform(T)
    P2, Qo2 = gramians(sys2)
    Tinv = np.linalg.inv(T)
    assert np.allclose(P2, Tinv @ P @ Tinv.T, atol=1e-8 * max(1, np.linalg.norm(P)))
    assert np.allclose(Qo2, T.T @ Qo @ T, atol=1e-8 * max(1, np.linalg.norm(Qo)))


def test_hsv_similarity_invariance(rng):
    sys = random_stable_system(6, 2, 2, rng)
    ref = hankel_singular_values(sys)
    for _ in range(5):
        T = rng.standard_normal((6, 6)) + 4 * np.eye(6)
        got = hankel_singular_values(sys.transform(T))
        assert np.max(np.abs(got - ref)) < 1e-8 * ref[0]


def test_balance_unstable_raises():
    sys = StateSpace([[1.0]], [[1.0]], [[1.0]], [[0.0]])
    with pytest.raises(Unstable):
        balance(sys)


def test_balance_nonminimal_raises():
    A = np.array([[-1.0, 0.0], [0.0, -2.0]])
    B = np.array([[1.0], [0.0]])
    C = np.array([[1.0, 1.0]])
    with pytest.raises(NotMinimal):
        balance(StateSpace(A, B, C, [[0.0]]))


def test_balanced_realization_invariants(rng):
    sys = random_stable_system(3, 1, 1, rng)
    with pytest.raises(BalredError):
        BalancedRealization(sys, np.array([1.0, 2.0, 0.5]), np.eye(3))  # increasing
    with pytest.raises(BalredError):
        BalancedRealization(sys, np.array([1.0, 0.5, -0.1]), np.eye(3))  # nonpositive
    with pytest.raises(BalredError):
        BalancedRealization(sys, np.array([1.0, 0.5]), np.eye(3))  # wrong length
