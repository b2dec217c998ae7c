"""Operators as matrices in a truncated oscillator eigenbasis.

The basis ``h_0 .. h_{N_basis-1}`` is sampled on the grid and each column
``O[:, k] = <h_j, A h_k>`` is computed by grid quadrature.  Only the
upper-left quarter block of a truncated matrix is trusted for products and
unitarity checks; entries near the cutoff miss the states beyond it.
"""

from __future__ import annotations

import json
import warnings

import numpy as np

from ..errors import GridOverflow
from ..indices import compose_nu
from ..symplectic import MWDescriptor
from .grid import GridFunction, grid_points, hermite_functions, mw_operator

__all__ = [
    "operator_in_basis", "quarter_unitarity_error", "smooth_window",
    "windowed_trace", "trace_mw", "composition_oracle", "NonEllipticWarning",
    "operator_to_json", "operator_from_json", "rotation", "basis_grid",
]


class NonEllipticWarning(UserWarning):
    """Truncated oscillator-basis trace is not guaranteed to converge."""


def rotation(theta):
    """``[[cos, sin], [-sin, cos]]``; ``rotation(pi/2)`` is ``J``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def basis_grid(N_basis, N=2048):
    """Smallest convenient ``x_max`` satisfying ``x_max >= sqrt(2 N_basis) + 4``."""
    return float(np.ceil(np.sqrt(2 * N_basis) + 4)), N


def operator_in_basis(applier, N_basis, x_max, N):
    """Matrix ``O[j, k] = dx sum conj(h_j) (applier h_k)``.

    ``applier`` maps ``GridFunction -> GridFunction``; if it also exposes
    ``apply_columns`` (as the kernel operators do) all columns are applied
    in one matrix product.
    """
    if N_basis > 256:
        raise ValueError("N_basis must be <= 256")
    if x_max < np.sqrt(2 * N_basis) + 4:
        raise GridOverflow(f"x_max={x_max} too small for {N_basis} basis functions",
                           {"required": float(np.sqrt(2 * N_basis) + 4)})
    x = grid_points(x_max, N)
    dx = 2.0 * x_max / N
    if np.pi / dx < 2 * np.sqrt(2 * N_basis + 1):
        raise GridOverflow("grid too coarse for the requested basis", {"dx": dx})
    H = hermite_functions(N_basis, x)
    if hasattr(applier, "apply_columns"):
        out = applier.apply_columns(H.T.astype(complex))
    else:
        out = np.column_stack([applier(GridFunction(x_max, h)).values for h in H])
    return dx * H @ out


def quarter_unitarity_error(O):
    """``max |(O^H O - I)|`` over the upper-left ``(N/2)^2`` block."""
    q = O.shape[0] // 2
    G = O.conj().T @ O
    return float(np.max(np.abs(G[:q, :q] - np.eye(q))))


def smooth_window(N_basis):
    """C-infinity weights falling from 1 at ``k = 0`` to 0 at ``k = N_basis``."""
    t = np.arange(N_basis) / N_basis

    def f(s):
        return np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)

    return f(1 - t) / (f(1 - t) + f(t))


def windowed_trace(O):
    """Smoothly regularized trace ``sum_k w(k / N) O_kk``.

    The plain partial sum of the diagonal oscillates without converging
    for rotations; the smooth cutoff converges faster than any power of
    ``N_basis`` for elliptic matrices.
    """
    return complex(np.sum(smooth_window(O.shape[0]) * np.diag(O)))


def trace_mw(D, N_basis=128, x_max=None, N=2048):
    """Regularized trace of ``R_nu(S)`` in the oscillator basis.

    Emits ``NonEllipticWarning`` when ``S`` is not elliptic (``|tr S| > 2``).
    """
    if abs(np.trace(np.asarray(D.S))) > 2 + 1e-9:
        warnings.warn("S is not elliptic; truncated trace may not converge", NonEllipticWarning)
    if x_max is None:
        x_max, _ = basis_grid(N_basis, N)
    O = operator_in_basis(mw_operator(D, x_max, N), N_basis, x_max, N)
    return windowed_trace(O)


def _quarter_residual(A, B):
    q = A.shape[0] // 2
    return float(np.max(np.abs(A[:q, :q] - B[:q, :q])))


def composition_oracle(D1, D2, N_basis=64, x_max=None, N=2048):
    """Identify the index of ``R_nu1(S1) R_nu2(S2)`` from basis matrices.

    Compares the product of the two truncated matrices with the matrix of
    ``R_k(S1 S2)`` for ``k = 0..3`` on the upper-left quarter block and
    returns ``(best k, max-abs residual)``.
    """
    if x_max is None:
        x_max, _ = basis_grid(N_basis, N)
    O1 = operator_in_basis(mw_operator(D1, x_max, N), N_basis, x_max, N)
    O2 = operator_in_basis(mw_operator(D2, x_max, N), N_basis, x_max, N)
    S12 = np.asarray(D1.S) @ np.asarray(D2.S)
    O12 = operator_in_basis(mw_operator(MWDescriptor(S12, 0), x_max, N), N_basis, x_max, N)
    prod = O1 @ O2
    residuals = [_quarter_residual(prod, 1j ** k * O12) for k in range(4)]
    k = int(np.argmin(residuals))
    return k, residuals[k]


def composition_prediction(D1, D2):
    """``compose_nu`` applied to a pair of descriptors."""
    return compose_nu(D1.nu, D2.nu, D1.M, D2.M, D1.n)


def operator_to_json(O):
    O = np.asarray(O)
    return json.dumps({"N_basis": O.shape[0], "re": O.real.tolist(), "im": O.imag.tolist()})


def operator_from_json(text):
    d = json.loads(text)
    return np.asarray(d["re"]) + 1j * np.asarray(d["im"])
