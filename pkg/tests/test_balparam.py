import warnings

import numpy as np
import pytest

from balred import (
    BalancedParams,
    alpha,
    balance,
    check_lemma1,
    eval_transfer,
    extract_params,
    gramians,
    param_census,
    random_stable_system,
    realize,
)
from balred.balancing import BalancedRealization
from balred.errors import (
    BalredError,
    DegenerateHSV,
    NotBalanced,
    UnstableRealizationWarning,
    ZeroRow,
)
from balred.statespace import StateSpace

from conftest import random_params

TWO_STATE = BalancedParams(
    theta=[1.0, 0.7], r=[1.0, 8.0], beta=[[1.0], [1.0]], gamma=[[1.0, 1.0]], D=[[0.0]]
)


def test_two_state_worked_example():
    bal = realize(TWO_STATE)
    A_expected = np.array([[-0.5, -4.70588235], [-4.70588235, -45.71428571]])
    assert np.allclose(bal.sys.A, A_expected, atol=1e-7)
    assert np.allclose(bal.sys.B, [[1.0], [8.0]])
    assert np.allclose(bal.sys.C, [[1.0, 8.0]])
    # off-diagonal coupling: (theta_2 - theta_1) / (theta_1^2 - theta_2^2)
    a12 = alpha(0, 1, TWO_STATE)
    assert abs(a12 - (0.7 - 1.0) / (1.0 - 0.49)) < 1e-12


def test_realized_gramians_are_diag_theta(rng):
    for _ in range(5):
        n = int(rng.integers(2, 6))
        params = random_params(rng, n, 2, 2)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UnstableRealizationWarning)
            bal = realize(params)
        if not np.all(np.linalg.eigvals(bal.sys.A).real < 0):
            continue  # Gramians only defined for Hurwitz draws
        P, Qo = gramians(bal.sys)
        X = np.diag(params.theta)
        assert np.linalg.norm(P - X, "fro") < 1e-8
        assert np.linalg.norm(Qo - X, "fro") < 1e-8


def test_lemma1_by_construction(rng):
    params = random_params(rng, 4, 2, 3)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnstableRealizationWarning)
        bal = realize(params)
    assert check_lemma1(bal) < 1e-12 * max(1.0, np.max(params.r) ** 2)


def test_round_trip_params(rng):
    for _ in range(10):
        n = int(rng.integers(2, 7))
        m = int(rng.integers(1, 3))
        p = int(rng.integers(1, 3))
        params = random_params(rng, n, m, p)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UnstableRealizationWarning)
            bal = realize(params)
            back = extract_params(bal)
            again = realize(back)
        assert np.allclose(back.theta, params.theta, atol=1e-10)
        assert np.allclose(back.r, params.r, rtol=1e-10)
        # beta/gamma agree up to the sign gauge; responses must agree exactly
        for w in (0.0, 0.5, 5.0):
            G1 = eval_transfer(bal.sys, 1j * w)
            G2 = eval_transfer(again.sys, 1j * w)
            assert np.max(np.abs(G1 - G2)) < 1e-8 * max(1.0, np.max(np.abs(G1)))


def test_extract_from_square_root_balancing(rng):
    # balance a random system, then extract and re-realize: same response
    sys = random_stable_system(4, 1, 1, rng)
    bal = balance(sys)
    params = extract_params(bal)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnstableRealizationWarning)
        again = realize(params)
    for w in (0.0, 1.0, 20.0):
        G1 = eval_transfer(sys, 1j * w)
        G2 = eval_transfer(again.sys, 1j * w)
        assert np.max(np.abs(G1 - G2)) < 1e-7 * max(1.0, np.max(np.abs(G1)))


def test_sign_gauge():
    params = extract_params(realize(TWO_STATE))
    # first nonzero entry of each beta row is nonnegative
    for row in params.beta:
        nz = row[np.abs(row) > 1e-12]
        assert nz.size == 0 or nz[0] >= 0


def test_param_validation():
    with pytest.raises(DegenerateHSV):
        BalancedParams([1.0, 1.0], [1.0, 1.0], [[1.0], [1.0]], [[1.0, 1.0]], [[0.0]])
    with pytest.raises(BalredError):
        BalancedParams([1.0, 0.5], [1.0, -1.0], [[1.0], [1.0]], [[1.0, 1.0]], [[0.0]])
    with pytest.raises(BalredError):
        BalancedParams([1.0, 0.5], [1.0, 1.0], [[2.0], [1.0]], [[1.0, 1.0]], [[0.0]])  # beta norm


def test_alpha_degenerate_raises():
    params = BalancedParams(
        [1.0, 0.5], [1.0, 1.0], [[1.0], [1.0]], [[1.0, 1.0]], [[0.0]]
    )
    with pytest.raises(BalredError):
        alpha(0, 0, params)


def test_extract_rejects_unbalanced(rng):
    sys = random_stable_system(3, 1, 1, rng)
    fake = BalancedRealization(sys, np.array([3.0, 2.0, 1.0]), np.eye(3))
    with pytest.raises(NotBalanced):
        extract_params(fake)


def test_extract_rejects_zero_row():
    A = np.array([[-0.5, 0.0], [0.0, -1.0]])
    B = np.array([[1.0], [0.0]])
    C = np.array([[1.0, 0.0]])
    sys = StateSpace(A, B, C, [[0.0]])
    fake = BalancedRealization(sys, np.array([1.0, 0.5]), np.eye(2))
    with pytest.raises(ZeroRow):
        extract_params(fake)


def test_params_json_round_trip(tmp_path):
    path = str(tmp_path / "params.json")
    TWO_STATE.save(path)
    loaded = BalancedParams.load(path)
    assert np.allclose(loaded.theta, TWO_STATE.theta)
    assert np.allclose(loaded.beta, TWO_STATE.beta)


def test_census_formulas():
    c = param_census("transfer_function", 3, 2, 4)
    assert c.total == 3 * 4 * 2 + 3 + 4 * 2 and c.identifiable == c.total
    c = param_census("transfer_function_rank1", 5, 2, 3)
    assert c.total == 5 * 3 + 5 * 2 + 3 * 2
    c = param_census("state_space", 4, 2, 3)
    assert c.identifiable == 3 * 2
    assert c.conditionally_identifiable == 16 + 4 * 2 + 4 * 3
    c = param_census("balanced_state_space", 4, 2, 3)
    assert c.identifiable == 4 * 2 + 4 * 3 + 3 * 2
    assert c.structural == 16
    with pytest.raises(BalredError):
        param_census("nope", 3, 1, 1)
    with pytest.raises(BalredError):
        param_census("state_space", 0, 1, 1)
