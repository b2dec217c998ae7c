import json

import numpy as np
import pytest

from metasymp import symplectic as sp
from metasymp.errors import (CayleyDomainError, DimensionError, FixedPointError, InvalidGenerator,
                             NotFree, NotSymplecticError)

J1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def test_standard_J_blocks():
    J = np.asarray(sp.standard_J(2))
    assert np.array_equal(J[:2, 2:], np.eye(2))
    assert np.array_equal(J[2:, :2], -np.eye(2))
    assert np.array_equal(J @ J, -np.eye(4))


def test_symplectic_validation():
    assert sp.is_symplectic(J1)
    assert not sp.is_symplectic(2 * np.eye(2))
    with pytest.raises(NotSymplecticError):
        sp.SymplecticMatrix(2 * np.eye(2))
    with pytest.raises(DimensionError):
        sp.SymplecticMatrix(np.eye(3))


@pytest.mark.parametrize("seed", range(5))
def test_symplectic_inverse(seed):
    S = np.asarray(sp.random_symplectic(2, seed))
    assert np.allclose(sp.symplectic_inverse(S) @ S, np.eye(4), atol=1e-9)


def test_J_generator():
    # W(x, x') = -x x' generates J
    W = sp.FreeGenerator([[0.0]], [[1.0]], [[0.0]], 0)
    assert np.array_equal(np.asarray(sp.matrix_from_generator(W)), J1)


def test_generator_validation():
    with pytest.raises(InvalidGenerator):
        sp.FreeGenerator([[0, 1], [0, 0]], np.eye(2), np.zeros((2, 2)))
    with pytest.raises(InvalidGenerator):
        sp.FreeGenerator([[0.0]], [[0.0]], [[0.0]])
    with pytest.raises(InvalidGenerator):
        sp.FreeGenerator([[0.0]], [[-1.0]], [[0.0]], 0)   # det L < 0 needs odd m
    with pytest.raises(NotFree):
        sp.generator_from_free(np.eye(2))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_generator_round_trip(n):
    for seed in range(20):
        W = sp.random_free(n, seed)
        S = sp.matrix_from_generator(W)
        assert sp.is_symplectic(np.asarray(S), 1e-9)
        W2 = sp.generator_from_free(S)
        for a, b in [(W.P, W2.P), (W.L, W2.L), (W.Q, W2.Q)]:
            assert np.allclose(a, b, atol=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_generator_inverse(n):
    for seed in range(10):
        W = sp.random_free(n, seed)
        Wi = sp.generator_inverse(W)
        prod = np.asarray(sp.matrix_from_generator(W)) @ np.asarray(sp.matrix_from_generator(Wi))
        assert np.allclose(prod, np.eye(2 * n), atol=1e-9)
        assert Wi.m == (n - W.m) % 4


def test_det_identity_on_J():
    W = sp.FreeGenerator([[0.0]], [[1.0]], [[0.0]], 0)
    assert sp.det_S_minus_I(W) == pytest.approx(2.0)
    assert np.linalg.det(J1 - np.eye(2)) == pytest.approx(2.0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_det_identity_against_eigenvalues(n):
    # independent oracle: det(S - I) = prod(lambda - 1)
    for seed in range(50):
        W = sp.random_free(n, seed)
        S = np.asarray(sp.matrix_from_generator(W))
        ev = np.prod(np.linalg.eigvals(S) - 1).real
        got = sp.det_S_minus_I(W)
        assert abs(got - ev) <= 1e-8 * max(1.0, abs(ev))


def test_cayley_of_J_is_half_identity():
    # (J - I)^-1 = -(J + I)/2 gives M_J = I/2 by hand
    assert np.allclose(sp.cayley_M(J1), 0.5 * np.eye(2), atol=1e-15)
    assert np.allclose(np.asarray(sp.inverse_cayley(0.5 * np.eye(2))), J1, atol=1e-15)


def test_cayley_errors():
    with pytest.raises(FixedPointError):
        sp.cayley_M(np.eye(2))
    # M - J/2 singular: M = [[0, 1/2], [1/2, 0]] has M - J/2 = [[0, 0], [1, 0]]
    with pytest.raises(CayleyDomainError):
        sp.inverse_cayley(np.array([[0.0, 0.5], [0.5, 0.0]]))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_inverse_cayley_lands_in_symplectic_group(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        R = rng.normal(size=(2 * n, 2 * n))
        M = R + R.T
        S = np.asarray(sp.inverse_cayley(M))
        assert sp.is_symplectic(S, 1e-8 * max(1, np.max(np.abs(S))) ** 2)
        assert np.allclose(sp.cayley_M(S), M, atol=1e-8 * max(1, np.max(np.abs(M))))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_momentum_pairing(n):
    rng = np.random.default_rng(10 + n)
    for seed in range(20):
        W = sp.random_free(n, seed)
        S = sp.matrix_from_generator(W)
        if not sp.det_clears(np.asarray(S) - np.eye(2 * n), 1e-6):
            continue
        lhs, rhs = sp.momentum_pairing(S, rng.normal(size=n))
        assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_free_factorization(n):
    for seed in range(10):
        W = sp.random_free(n, seed)
        F = [np.asarray(f) for f in sp.free_factorization(W)]
        assert np.allclose(np.linalg.multi_dot(F), np.asarray(sp.matrix_from_generator(W)), atol=1e-10)


@pytest.mark.parametrize("S", [np.eye(2), J1, -np.eye(4), np.eye(6), np.diag([2.0, 0.5])])
def test_split_special_matrices(S):
    n = S.shape[0] // 2
    W1, W2 = sp.split_into_free_pair(S)
    S1 = np.asarray(sp.matrix_from_generator(W1))
    S2 = np.asarray(sp.matrix_from_generator(W2))
    assert np.allclose(S1 @ S2, S, atol=1e-12)
    for Sk in (S1, S2):
        assert sp.det_clears(Sk - np.eye(2 * n))


def test_split_skip_gives_different_split():
    S = np.asarray(sp.random_symplectic(1, 3))
    a = sp.split_into_free_pair(S, skip=0)
    b = sp.split_into_free_pair(S, skip=1)
    assert not np.allclose(a[0].Q, b[0].Q) or not np.allclose(a[0].P, b[0].P)


def test_det_clears():
    assert sp.det_clears(np.diag([1e6, 1.0]))
    assert not sp.det_clears(np.diag([1.0, 1e-12]))
    assert not sp.det_clears(np.zeros((2, 2)))


def test_descriptor_caches():
    D = sp.MWDescriptor(J1, 3)
    assert D.detSmI == pytest.approx(2.0)
    assert np.allclose(D.M, 0.5 * np.eye(2))
    assert D.with_nu(5).nu == 1
    with pytest.raises(FixedPointError):
        sp.MWDescriptor(np.eye(2), 0)


def test_json_round_trip(tmp_path):
    W = sp.random_free(2, 4)
    back = sp.load_json_object(json.dumps(sp.generator_to_json(W)))
    assert np.array_equal(back.P, W.P) and back.m == W.m
    S = sp.random_symplectic(2, 5)
    p = tmp_path / "s.json"
    p.write_text(json.dumps(sp.symplectic_to_json(S)))
    assert np.array_equal(np.asarray(sp.load_json_object(str(p))), np.asarray(S))
    D = sp.load_json_object({"n": 1, "rows": J1.tolist(), "nu": 3})
    assert isinstance(D, sp.MWDescriptor) and D.nu == 3
    with pytest.raises(DimensionError):
        sp.load_json_object({"n": 2, "rows": J1.tolist()})
