import json

import numpy as np
import pytest

from metasymp import indices as ix
from metasymp import symplectic as sp
from metasymp.errors import DimensionError, GridOverflow
from metasymp.weyl import grid
from metasymp.weyl.basis import rotation
from metasymp.weyl.gaussian import GaussianState, mw_apply_gaussian

W_J = sp.FreeGenerator([[0.0]], [[1.0]], [[0.0]], 0)


def _generator(S):
    W = sp.generator_from_free(S)
    return W.with_m(ix.maslov_choices(W.L)[0])


def _gauss(center=(0.3, -0.4), width=1.1 + 0.2j):
    return GaussianState(center, width, 0.1j).sample()


def test_grid_function_basics():
    f = grid.GridFunction.from_callable(lambda x: np.exp(-x * x / 2))
    assert f.N == 1024 and f.dx == pytest.approx(24 / 1024)
    assert f.norm() == pytest.approx(np.pi ** 0.25, rel=1e-12)
    assert f.inner(f) == pytest.approx(np.sqrt(np.pi), rel=1e-12)
    with pytest.raises(DimensionError):
        grid.GridFunction(12.0, np.zeros(1000))


def test_grid_function_json():
    f = _gauss()
    g = grid.GridFunction.from_json(f.to_json())
    assert np.array_equal(f.values, g.values) and g.x_max == f.x_max
    d = json.loads(f.to_json())
    assert set(d) == {"x_max", "N", "re", "im"}


def test_hermite_orthonormal():
    x = grid.grid_points(16.0, 2048)
    H = grid.hermite_functions(100, x)
    G = (H @ H.T) * (x[1] - x[0])
    assert np.max(np.abs(G - np.eye(100))) < 1e-10
    # h_1 in closed form
    h1 = np.sqrt(2) * np.pi ** -0.25 * x * np.exp(-x * x / 2)
    assert np.allclose(H[1], h1, atol=1e-14)


def test_hw_apply_translates():
    f = GaussianState((0.0, 0.0), 1.0).sample()
    out = grid.hw_apply((1.5, 0.7), f)
    # T(z0) g = exp(i p0 x0 / 2) * (Gaussian centred at z0, phase referred to x0)
    ref = GaussianState((1.5, 0.7), 1.0, 0.5j * 0.7 * 1.5).sample()
    assert (out - ref).norm() < 1e-12
    assert out.norm() == pytest.approx(f.norm(), rel=1e-12)


def test_hw_relations():
    f = _gauss()
    r1, r2 = grid.hw_commutation_check((1.0, -2.0), (-0.7, 0.5), f)
    assert r1 < 1e-10 and r2 < 1e-10


def test_hw_overflow():
    with pytest.raises(GridOverflow):
        grid.hw_apply((7.0, 0.0), _gauss())


def test_quad_fourier_of_J_on_hermite():
    # S_{W,0} for W = -x y is e^{-i pi/4} times the unitary Fourier transform,
    # and the Fourier transform multiplies h_k by (-i)^k
    x = grid.grid_points(12.0, 1024)
    H = grid.hermite_functions(6, x)
    for k in range(6):
        f = grid.GridFunction(12.0, H[k])
        out = grid.quad_fourier_apply(W_J, f)
        assert np.allclose(out.values, np.exp(-0.25j * np.pi) * (-1j) ** k * H[k], atol=1e-10)


def test_quad_fourier_sheet_flip():
    f = _gauss()
    a = grid.quad_fourier_apply(W_J, f, 0)
    b = grid.quad_fourier_apply(W_J, f, 2)
    assert (a + b).norm() < 1e-12


def test_quad_fourier_requires_n1():
    with pytest.raises(DimensionError):
        grid.quad_fourier_operator(sp.random_free(2, 0))


def test_mw_minus_identity_is_parity():
    # M = 0 for S = -I: R_nu(-I) f(x) = i^nu f(-x)
    f = _gauss()
    for nu in range(4):
        out = grid.mw_apply_grid(sp.MWDescriptor(-np.eye(2), nu), f)
        ref = 1j ** nu * f.values[(-np.arange(f.N)) % f.N]
        assert np.allclose(out.values, ref, atol=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_grid_operators_agree_with_closed_form(seed):
    rng = np.random.default_rng(seed)
    for _ in range(100):
        W = sp._draw_free(1, rng)
        S = np.asarray(sp.matrix_from_generator(W))
        if np.linalg.norm(S, 2) < 3 and abs(sp.hessian_Wxx(W)[0, 0]) > 0.2:
            break
    g = GaussianState((0.3, -0.2), 1.0 + 0.3j)
    f = g.sample()
    D = sp.MWDescriptor(S, ix.nu_from_generator(W))
    ref = mw_apply_gaussian(D, g).sample()
    assert (grid.quad_fourier_apply(W, f) - ref).norm() < 1e-8
    assert (grid.mw_apply_grid(D, f) - ref).norm() < 1e-8


@pytest.mark.parametrize("S", [rotation(0.7), rotation(2.0), np.diag([1.5, 1 / 1.5]),
                               np.array([[1.0, 0.0], [0.8, 1.0]]) @ rotation(1.1)])
def test_unitarity(S):
    f = _gauss(width=1.4)
    D = sp.MWDescriptor(S, 1)
    out = grid.mw_apply_grid(D, f)
    assert abs(out.norm() - f.norm()) < 1e-6
    if abs(S[0, 1]) > 1e-9:
        W = _generator(S)
        assert abs(grid.quad_fourier_apply(W, f).norm() - f.norm()) < 1e-6


def test_covariance_both_operator_families():
    S = rotation(0.9)
    W = _generator(S)
    D = sp.MWDescriptor(S, ix.nu_from_generator(W))
    f = _gauss()
    z = np.array([0.4, -0.3])
    for op in (grid.quad_fourier_operator(W), grid.mw_operator(D)):
        assert grid.covariance_residual(op, S, z, f) < 1e-5
        # a constant phase on the operator does not matter
        assert grid.covariance_residual(op.scaled(np.exp(0.7j)), S, z, f) < 1e-5


def test_covariance_detects_wrong_matrix():
    S = rotation(0.9)
    op = grid.mw_operator(sp.MWDescriptor(S, 3))
    assert grid.covariance_residual(op, rotation(1.2), np.array([1.0, 0.5]), _gauss()) > 1e-2


def test_tail_mass_check():
    wide = grid.GridFunction.from_callable(lambda x: np.exp(-((x - 10) ** 2)))
    assert grid.tail_mass(wide) > 1e-3
    assert grid.tail_mass(_gauss()) < 1e-20
