import json
import os

import numpy as np
import pytest

from balred import StateSpace, eval_transfer, random_stable_system
from balred.errors import BalredError
from balred.statespace import atomic_write_text


def test_shape_validation():
    with pytest.raises(BalredError):
        StateSpace([[1.0, 2.0]], [[1.0]], [[1.0]], [[0.0]])  # A not square
    with pytest.raises(BalredError):
        StateSpace([[-1.0]], [[1.0], [2.0]], [[1.0]], [[0.0]])  # B rows
    with pytest.raises(BalredError):
        StateSpace([[-1.0]], [[1.0]], [[1.0, 2.0]], [[0.0]])  # C cols
    with pytest.raises(BalredError):
        StateSpace([[-1.0]], [[1.0]], [[1.0]], [[0.0, 0.0]])  # D shape
    with pytest.raises(BalredError):
        StateSpace([[np.nan]], [[1.0]], [[1.0]], [[0.0]])


def test_matrices_read_only(rng):
    sys = random_stable_system(3, 1, 1, rng)
    with pytest.raises(ValueError):
        sys.A[0, 0] = 1.0


def test_transform_preserves_response(rng):
    sys = random_stable_system(4, 2, 2, rng)
    T = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    sys2 = sys.transform(T)
    for w in (0.0, 0.3, 2.0, 50.0):
        G1 = eval_transfer(sys, 1j * w)
        G2 = eval_transfer(sys2, 1j * w)
        assert np.max(np.abs(G1 - G2)) < 1e-8 * max(1.0, np.max(np.abs(G1)))


def test_transform_convention():
    # transform(T) must be (T^-1 A T, T^-1 B, C T, D)
    sys = StateSpace([[-1.0, 2.0], [0.0, -3.0]], [[1.0], [1.0]], [[1.0, 0.0]], [[0.5]])
    T = np.array([[2.0, 1.0], [0.0, 1.0]])
    out = sys.transform(T)
    Tinv = np.linalg.inv(T)
    assert np.allclose(out.A, Tinv @ sys.A @ T)
    assert np.allclose(out.B, Tinv @ sys.B)
    assert np.allclose(out.C, sys.C @ T)
    assert np.allclose(out.D, sys.D)


def test_json_round_trip(tmp_path, rng):
    sys = random_stable_system(3, 2, 1, rng)
    path = str(tmp_path / "sys.json")
    sys.save(path)
    loaded = StateSpace.load(path)
    for X, Y in ((sys.A, loaded.A), (sys.B, loaded.B), (sys.C, loaded.C), (sys.D, loaded.D)):
        assert np.array_equal(X, Y)
    with open(path) as fh:
        data = json.load(fh)
    assert set(data) == {"A", "B", "C", "D"}


def test_load_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(BalredError):
        StateSpace.load(str(bad))
    partial = tmp_path / "partial.json"
    partial.write_text(json.dumps({"A": [[-1.0]], "B": [[1.0]]}))
    with pytest.raises(BalredError):
        StateSpace.load(str(partial))


def test_atomic_write(tmp_path):
    path = str(tmp_path / "out.txt")
    atomic_write_text(path, "hello")
    assert open(path).read() == "hello"
    atomic_write_text(path, "replaced")
    assert open(path).read() == "replaced"
    assert [f for f in os.listdir(tmp_path) if f.startswith(".tmp-")] == []


def test_random_stable_system_seeded():
    a = random_stable_system(5, 2, 2, np.random.default_rng(7))
    b = random_stable_system(5, 2, 2, np.random.default_rng(7))
    assert np.array_equal(a.A, b.A)
    assert np.array_equal(a.B, b.B)
    eigs = np.linalg.eigvals(a.A)
    assert np.all(eigs.real < 0)
