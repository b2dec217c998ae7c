import numpy as np
import pytest

from metasymp import indices as ix
from metasymp import symplectic as sp
from metasymp.errors import FresnelDegenerate
from metasymp.weyl import fresnel
from metasymp.weyl.basis import rotation
from metasymp.weyl.gaussian import (GaussianState, alt_forms_residual, gaussian_l2_distance,
                                    mw_apply_gaussian)


def test_gaussian_state_norm_and_coefficients():
    g = GaussianState((0.4, -1.2), 0.8 + 0.5j, 0.3 - 0.2j)
    assert g.sample(16.0, 2048).norm() == pytest.approx(g.norm(), rel=1e-12)
    back = GaussianState.from_coefficients(*g.coefficients())
    x = np.linspace(-3, 3, 7)
    assert np.allclose(back(x), g(x), atol=1e-14)
    assert GaussianState.standard().norm() == pytest.approx(1.0)


def test_rotation_keeps_ground_state():
    # the oscillator ground state is an eigenvector of R_3(rotation(theta)) with eigenvalue e^{-i theta/2}
    g = GaussianState.standard()
    for theta in (0.5, 1.5, 3.0, 4.5):
        out = mw_apply_gaussian(sp.MWDescriptor(rotation(theta), 3), g)
        assert gaussian_l2_distance(g.times(np.exp(-0.5j * theta)), out) < 1e-12


def test_J_moves_centre():
    out = mw_apply_gaussian(sp.MWDescriptor(rotation(np.pi / 2), 3), GaussianState.standard((1.0, 0.0)))
    assert np.allclose(out.center, (0.0, -1.0), atol=1e-12)


def test_sheet_flip_in_closed_form():
    g = GaussianState((0.2, 0.1), 1.3)
    S = rotation(1.0) @ np.diag([1.2, 1 / 1.2])
    a = mw_apply_gaussian(sp.MWDescriptor(S, 1), g)
    b = mw_apply_gaussian(sp.MWDescriptor(S, 3), g)
    assert gaussian_l2_distance(a, b.times(-1)) < 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_alternative_forms(seed):
    S = np.asarray(sp.random_symplectic(1, seed))
    if not sp.det_clears(S - np.eye(2), 1e-2):
        pytest.skip("near fixed point")
    g = GaussianState((0.5, -0.3), 0.9 + 0.2j)
    r2, r1 = alt_forms_residual(sp.MWDescriptor(S, seed % 4), g)
    assert r1 < 1e-8 and r2 < 1e-8


def test_unitarity_in_closed_form():
    g = GaussianState((0.5, -0.3), 0.9 + 0.2j, 0.1)
    for seed in range(10):
        S = np.asarray(sp.random_symplectic(1, seed))
        if sp.det_clears(S - np.eye(2), 1e-3):
            out = mw_apply_gaussian(sp.MWDescriptor(S, 0), g)
            assert out.norm() == pytest.approx(g.norm(), rel=1e-9)


def test_matches_quadratic_fourier_index():
    # the index nu = m - Inert W_xx makes the two operators equal, phase included
    for seed in range(20):
        W = sp.random_free(1, seed)
        S = sp.matrix_from_generator(W)
        if not sp.det_clears(np.asarray(S) - np.eye(2), 1e-3):
            continue
        g = GaussianState((0.1, 0.2), 1.0)
        for m in ix.maslov_choices(W.L):
            nu = ix.nu_from_generator(W, m)
            out = mw_apply_gaussian(sp.MWDescriptor(S, nu), g)
            wrong = mw_apply_gaussian(sp.MWDescriptor(S, nu + 1), g)
            assert gaussian_l2_distance(out, out) == 0
            assert gaussian_l2_distance(out, wrong) > 1.0


# Fresnel integral

def test_fresnel_closed_values():
    assert fresnel.fresnel_closed([[1.0]], [0.0]) == pytest.approx(np.exp(0.25j * np.pi))
    assert fresnel.fresnel_closed([[-1.0]], [0.0]) == pytest.approx(np.exp(-0.25j * np.pi))
    assert fresnel.fresnel_closed(np.diag([1.0, -2.0]), [0.0, 0.0]) == pytest.approx(1 / np.sqrt(2))
    # completing the square: exp(-i v^2 / 2) for M = 1
    assert fresnel.fresnel_closed([[1.0]], [1.3]) == pytest.approx(np.exp(0.25j * np.pi - 0.5j * 1.69))
    with pytest.raises(FresnelDegenerate):
        fresnel.fresnel_closed(np.diag([1.0, 0.0]), [0.0, 0.0])


def test_damped_gaussian_limit():
    # with lam = 0 the damped integral is an ordinary Gaussian: (2 eps)^-1/2 exp(-w^2 / (4 eps))
    eps, w = 0.1, 0.7
    assert fresnel.damped_fresnel_1d(0.0, w, eps) == pytest.approx(
        (2 * eps) ** -0.5 * np.exp(-w * w / (4 * eps)), rel=1e-10)


def test_richardson_exact_on_polynomial():
    eps = [0.4, 0.2, 0.1, 0.05]
    vals = [3.0 + 2 * e - 5 * e * e + 0.5 * e ** 3 for e in eps]
    assert fresnel.richardson(vals, eps)[-1][0] == pytest.approx(3.0, abs=1e-12)


@pytest.mark.parametrize("M,v", [
    ([[1.0]], [0.0]),
    ([[-2.5]], [1.7]),
    ([[1.0, 0.4], [0.4, -0.8]], [0.5, -1.0]),
    ([[2.0, -0.3], [-0.3, 1.1]], [2.0, 1.0]),
])
def test_fresnel_numeric_matches_closed(M, v):
    assert abs(fresnel.fresnel_numeric(M, v) - fresnel.fresnel_closed(M, v)) < 1e-6
