"""Twisted convolution of phase-space symbols (n = 1).

    a *_sigma b (z) = int exp(i/2 sigma(z, u)) a(z - u) b(u) du

Symbols are sampled on the square lattice ``z = h (i - K, j - K)``,
``0 <= i, j <= 2K``, with arrays indexed ``[x index, p index]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GridOverflow
from .grid import GridFunction, _spectral_shift

__all__ = ["PhaseGrid", "twisted_convolution", "twisted_gaussian_closed",
           "weyl_from_twisted", "compose_twisted"]


@dataclass(frozen=True)
class PhaseGrid:
    h: float
    K: int

    @property
    def axis(self):
        return self.h * (np.arange(2 * self.K + 1) - self.K)

    def mesh(self):
        return np.meshgrid(self.axis, self.axis, indexing="ij")

    def sample(self, func):
        X, P = self.mesh()
        return func(X, P)


def _check_decay(a, limit=1e-5):
    w = np.abs(a) ** 2
    total = w.sum()
    ring = w.copy()
    ring[2:-2, 2:-2] = 0.0
    if total > 0 and ring.sum() / total > limit:
        raise GridOverflow("symbol does not decay inside the phase-space grid",
                           {"edge_fraction": float(ring.sum() / total)})


def twisted_convolution(a, b, grid):
    """Direct double-sum quadrature of ``a *_sigma b`` on ``grid``.

    Values of ``a(z - u)`` falling outside the lattice are taken as zero.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _check_decay(a)
    _check_decay(b)
    G = 2 * grid.K + 1
    X, P = grid.mesh()
    pad = np.zeros((3 * G, 3 * G), dtype=complex)
    pad[G:2 * G, G:2 * G] = a
    out = np.zeros((G, G), dtype=complex)
    h = grid.h
    for iu in range(G):
        xu = h * (iu - grid.K)
        for ju in range(G):
            bu = b[iu, ju]
            if bu == 0:
                continue
            pu = h * (ju - grid.K)
            # a(z - u): lattice index of z minus offset of u
            r0, c0 = G + grid.K - iu, G + grid.K - ju
            sl = pad[r0:r0 + G, c0:c0 + G]
            # sigma(z, u) = p_z x_u - p_u x_z
            out += np.exp(0.5j * (P * xu - pu * X)) * sl * bu
    return out * h * h


def twisted_gaussian_closed(Aa, alpha, Ab, beta, z):
    """Closed form of ``a *_sigma b`` for ``a = exp(-z^T Aa z/2 + alpha.z)`` (same for ``b``).

    ``Aa, Ab`` real symmetric positive definite; ``alpha, beta`` complex.
    ``z`` has shape ``(..., 2)``.
    """
    Aa = np.asarray(Aa, dtype=float)
    Ab = np.asarray(Ab, dtype=float)
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    S = Aa + Ab
    Si = np.linalg.inv(S)
    z = np.asarray(z, dtype=float)
    # exponent in u: -u^T S u / 2 + u.h,  h = (Aa + i/2 J) z + beta - alpha
    hvec = z @ (Aa + 0.5j * J).T + (beta - alpha)
    quad = 0.5 * np.einsum("...i,ij,...j->...", hvec, Si, hvec)
    rest = -0.5 * np.einsum("...i,ij,...j->...", z, Aa, z) + z @ alpha
    return 2 * np.pi / np.sqrt(np.linalg.det(S)) * np.exp(quad + rest)


def compose_twisted(a_sigma, b_sigma, grid):
    """Twisted symbol of ``a^w b^w``: ``(2 pi)^-1 (a_sigma *_sigma b_sigma)``."""
    return twisted_convolution(a_sigma, b_sigma, grid) / (2 * np.pi)


def weyl_from_twisted(a_sigma, grid, f):
    """``a^w f = (2 pi)^-1 int a_sigma(z0) T(z0) f dz0`` by lattice quadrature."""
    x = f.x
    out = np.zeros(f.N, dtype=complex)
    for i, x0 in enumerate(grid.axis):
        shifted = _spectral_shift(f.values, x0, f.dx)
        # sum over p0 of a_sigma(x0, p0) exp(i p0 (x - x0/2))
        phase = np.exp(1j * np.outer(grid.axis, x - 0.5 * x0))
        out += (a_sigma[i] @ phase) * shifted
    return GridFunction(f.x_max, out * grid.h * grid.h / (2 * np.pi))
