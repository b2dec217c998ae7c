import numpy as np
import pytest

from metasymp import symplectic as sp
from metasymp.errors import GridOverflow
from metasymp.weyl import basis, grid, twisted
from metasymp.weyl.gaussian import GaussianState


def test_rotation_convention():
    assert np.allclose(basis.rotation(np.pi / 2), [[0, 1], [-1, 0]])


def test_rotation_operator_is_diagonal():
    # R_3(rotation(theta)) h_k = e^{-i theta (k + 1/2)} h_k
    theta = 0.8
    x_max, N = basis.basis_grid(32)
    O = basis.operator_in_basis(grid.mw_operator(sp.MWDescriptor(basis.rotation(theta), 3), x_max, N), 32, x_max, N)
    k = np.arange(16)
    assert np.allclose(np.diag(O)[:16], np.exp(-1j * theta * (k + 0.5)), atol=1e-8)
    assert basis.quarter_unitarity_error(O) < 1e-4


def test_operator_in_basis_limits():
    with pytest.raises(ValueError):
        basis.operator_in_basis(lambda f: f, 300, 30.0, 4096)
    with pytest.raises(GridOverflow):
        basis.operator_in_basis(lambda f: f, 64, 8.0, 2048)


def test_identity_in_basis():
    x_max, N = basis.basis_grid(64)
    O = basis.operator_in_basis(lambda f: f, 64, x_max, N)
    assert np.allclose(O, np.eye(64), atol=1e-10)


def test_smooth_window():
    w = basis.smooth_window(64)
    assert w[0] == 1.0 and 0 < w[-1] < 1e-10
    assert np.all(np.diff(w) <= 0)


def test_trace_at_pi():
    # exact value i^3 / sqrt|det(-2 I)| = -i / 2
    tr = basis.trace_mw(sp.MWDescriptor(basis.rotation(np.pi), 3), 128)
    assert abs(tr - (-0.5j)) < 1e-3


def test_trace_other_sheet():
    tr3 = basis.trace_mw(sp.MWDescriptor(basis.rotation(1.0), 3), 128)
    tr1 = basis.trace_mw(sp.MWDescriptor(basis.rotation(1.0), 1), 128)
    assert abs(tr1 + tr3) < 1e-12
    # geometric series of e^{-i theta (k + 1/2)}: 1 / (2 i sin(theta / 2))
    assert abs(tr3 - 1 / (2j * np.sin(0.5))) < 5e-3


@pytest.mark.parametrize("theta", [np.pi / 4, 3 * np.pi / 4, 2.2])
def test_trace_converges_monotonically(theta):
    exact = 1 / (2j * np.sin(theta / 2))
    errs = [abs(basis.trace_mw(sp.MWDescriptor(basis.rotation(theta), 3), nb) - exact)
            for nb in (32, 64, 128, 256)]
    # decreasing, up to wobble below 1e-6 where the smallest bases are already accurate
    assert all(b < a or b < 1e-6 for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-6


def test_non_elliptic_warning():
    with pytest.warns(basis.NonEllipticWarning):
        basis.trace_mw(sp.MWDescriptor(np.diag([2.0, 0.5]), 0), 32)


def test_composition_oracle_J_squared():
    J = sp.MWDescriptor(basis.rotation(np.pi / 2), 3)
    k, res = basis.composition_oracle(J, J, 32)
    assert k == 3 == basis.composition_prediction(J, J)
    assert res < 1e-6
    k, _ = basis.composition_oracle(J.with_nu(1), J, 32)
    assert k == 1


def test_operator_json_round_trip():
    O = np.arange(4.0).reshape(2, 2) + 1j
    assert np.array_equal(basis.operator_from_json(basis.operator_to_json(O)), O)


# twisted convolution

def _sym(pg, A, a):
    X, P = pg.mesh()
    Z = np.stack([X, P], -1)
    return Z, np.exp(-0.5 * np.einsum("...i,ij,...j->...", Z, A, Z) + Z @ np.asarray(a))


def test_twisted_closed_form():
    pg = twisted.PhaseGrid(0.25, 32)
    Aa = np.array([[1.2, 0.2], [0.2, 0.9]])
    Ab = np.array([[0.8, -0.1], [-0.1, 1.1]])
    al = np.array([0.2 + 0.3j, -0.1 + 0.5j])
    be = np.array([-0.3 - 0.2j, 0.1 + 0.1j])
    Z, a = _sym(pg, Aa, al)
    _, b = _sym(pg, Ab, be)
    c = twisted.twisted_convolution(a, b, pg)
    cc = twisted.twisted_gaussian_closed(Aa, al, Ab, be, Z)
    assert np.max(np.abs(c - cc)) / np.max(np.abs(cc)) < 1e-10


def test_twisted_delta_is_unit():
    pg = twisted.PhaseGrid(0.25, 20)
    _, b = _sym(pg, np.eye(2), [0.1, 0.2j])
    delta = np.zeros_like(b)
    delta[pg.K, pg.K] = 1 / pg.h ** 2
    assert np.allclose(twisted.twisted_convolution(delta, b, pg), b, atol=1e-14)


def test_twisted_is_not_commutative():
    pg = twisted.PhaseGrid(0.25, 24)
    _, a = _sym(pg, np.eye(2), [0.5, 0.0])
    _, b = _sym(pg, np.eye(2), [0.0, 0.5])
    ab = twisted.twisted_convolution(a, b, pg)
    ba = twisted.twisted_convolution(b, a, pg)
    assert np.max(np.abs(ab - ba)) > 1e-3


def test_twisted_symbol_composition():
    pg = twisted.PhaseGrid(0.25, 32)
    _, a = _sym(pg, np.array([[1.0, 0.1], [0.1, 1.3]]), [0.2, 0.4j])
    _, b = _sym(pg, np.array([[0.9, 0.0], [0.0, 1.2]]), [-0.1j, 0.3])
    f = GaussianState((0.2, -0.1), 1.0).sample(16.0, 512)
    lhs = twisted.weyl_from_twisted(twisted.compose_twisted(a, b, pg), pg, f)
    rhs = twisted.weyl_from_twisted(a, pg, twisted.weyl_from_twisted(b, pg, f))
    assert (lhs - rhs).norm() / rhs.norm() < 1e-4


def test_twisted_requires_decay():
    pg = twisted.PhaseGrid(0.25, 8)
    a = np.ones((17, 17), dtype=complex)
    with pytest.raises(GridOverflow):
        twisted.twisted_convolution(a, a, pg)
