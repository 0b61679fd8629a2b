import numpy as np
import pytest

from balred import StateSpace, gramians, is_stable, random_stable_system, solve_lyapunov
from balred.errors import NotMinimalWarning, SingularSystem, Unstable

from conftest import kron_lyapunov


def test_matches_kronecker_oracle(rng):
    for _ in range(20):
        n = int(rng.integers(2, 9))
        sys = random_stable_system(n, 2, 2, rng)
        Q = rng.standard_normal((n, n))
        Q = Q @ Q.T + np.eye(n)
        X = solve_lyapunov(sys.A, Q)
        X_oracle = kron_lyapunov(sys.A, Q)
        rel = np.linalg.norm(X - X_oracle, "fro") / np.linalg.norm(X_oracle, "fro")
        assert rel < 1e-10


def test_residual_is_small(rng):
    sys = random_stable_system(5, 1, 1, rng)
    Q = np.eye(5)
    X = solve_lyapunov(sys.A, Q)
    res = np.linalg.norm(sys.A @ X + X @ sys.A.T + Q, "fro")
    assert res <= 1e-10 * max(1.0, np.linalg.norm(Q, "fro"))
    assert np.allclose(X, X.T)


def test_marginally_stable_rejected():
    # eigenvalues +1/-1 sum to zero pairwise: Lyapunov operator singular
    A = np.array([[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(SingularSystem):
        solve_lyapunov(A, np.eye(2))


def test_is_stable():
    assert is_stable(np.array([[-1.0, 0.5], [0.0, -2.0]]))
    assert not is_stable(np.array([[1.0, 0.0], [0.0, -2.0]]))
    assert not is_stable(np.array([[0.0, 1.0], [-1.0, 0.0]]))  # marginal
    sys = StateSpace([[-3.0]], [[1.0]], [[1.0]], [[0.0]])
    assert is_stable(sys)


def test_gramians_positive_definite(rng):
    sys = random_stable_system(6, 2, 1, rng)
    P, Qo = gramians(sys)
    assert np.all(np.linalg.eigvalsh(P) > 0)
    assert np.all(np.linalg.eigvalsh(Qo) > 0)
    # defining equations hold
    assert np.linalg.norm(sys.A @ P + P @ sys.A.T + sys.B @ sys.B.T, "fro") < 1e-9
    assert np.linalg.norm(sys.A.T @ Qo + Qo @ sys.A + sys.C.T @ sys.C, "fro") < 1e-9


def test_gramians_unstable_raises():
    sys = StateSpace([[1.0]], [[1.0]], [[1.0]], [[0.0]])
    with pytest.raises(Unstable):
        gramians(sys)


def test_gramians_warn_on_nonminimal():
    # second state unreachable: controllability Gramian singular
    A = np.array([[-1.0, 0.0], [0.0, -2.0]])
    B = np.array([[1.0], [0.0]])
    C = np.array([[1.0, 1.0]])
    sys = StateSpace(A, B, C, [[0.0]])
    with pytest.warns(NotMinimalWarning):
        gramians(sys)
