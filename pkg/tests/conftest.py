import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def kron_lyapunov(A, Q):
    """Independent oracle for A X + X A^T = -Q via the Kronecker product.

    vec(A X) = (I kron A) vec(X) and vec(X A^T) = (A kron I) vec(X) with
    column-major vec, so the equation is a plain dense linear solve.
    """
    A = np.asarray(A, dtype=float)
    Q = np.asarray(Q, dtype=float)
    n = A.shape[0]
    K = np.kron(np.eye(n), A) + np.kron(A, np.eye(n))
    x = np.linalg.solve(K, -Q.flatten(order="F"))
    X = x.reshape((n, n), order="F")
    return 0.5 * (X + X.T)


def random_params(rng, n, m, p):
    """Random valid balanced-parameterization tuple with separated HSVs."""
    from balred import BalancedParams

    theta = 2.0 * np.cumprod(rng.uniform(0.5, 0.85, size=n))
    r = rng.uniform(0.3, 3.0, size=n)
    beta = rng.standard_normal((n, m))
    beta /= np.linalg.norm(beta, axis=1)[:, None]
    gamma = rng.standard_normal((p, n))
    gamma /= np.linalg.norm(gamma, axis=0)[None, :]
    D = rng.standard_normal((p, m))
    return BalancedParams(theta, r, beta, gamma, D)
