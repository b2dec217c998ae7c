"""Generalized Fresnel integral and an independent damped-quadrature oracle.

    (2 pi)^(-m/2) int exp(-i <v, u>) exp(i/2 <M u, u>) du
        = |det M|^(-1/2) exp(i pi/4 sgn M) exp(-i/2 <M^-1 v, v>)
"""

from __future__ import annotations

import numpy as np

from ..errors import FresnelDegenerate, NumericalFailure
from ..indices import inertia
from ..symplectic import det_clears

__all__ = ["fresnel_closed", "fresnel_numeric", "damped_fresnel_1d", "richardson"]

DEFAULT_EPS = (4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4)


def fresnel_closed(M, v):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if not det_clears(M):
        raise FresnelDegenerate("M is singular")
    sgn = inertia(M).signature
    return complex(abs(np.linalg.det(M)) ** -0.5 * np.exp(0.25j * np.pi * sgn)
                   * np.exp(-0.5j * v @ np.linalg.solve(M, v)))


def damped_fresnel_1d(lam, w, eps, cutoff=40.0):
    """Trapezoid value of ``(2 pi)^-1/2 int e^{-i w u + i lam u^2 / 2 - eps u^2} du``.

    The domain is cut where the damping drops below ``e^-cutoff``; the step
    resolves the largest local frequency ``|lam| U + |w|`` with margin.
    """
    U = np.sqrt(cutoff / eps)
    h = np.pi / (1.2 * (abs(lam) * U + abs(w)) + 5.0)
    u = np.arange(-U, U + 0.5 * h, h)
    return complex(np.sum(np.exp(-1j * w * u + 0.5j * lam * u * u - eps * u * u)) * h
                   / np.sqrt(2 * np.pi))


def richardson(values, eps):
    """Richardson table for ``F(eps) = F0 + a1 eps + a2 eps^2 + ...``.

    ``eps`` must be geometric.  Returns the list of table rows; the last
    row holds the extrapolated value.
    """
    ratio = eps[0] / eps[1]
    rows = [list(values)]
    for j in range(1, len(values)):
        prev = rows[-1]
        f = ratio ** j
        rows.append([(f * prev[i + 1] - prev[i]) / (f - 1) for i in range(len(prev) - 1)])
    return rows


def fresnel_numeric(M, v, eps_list=DEFAULT_EPS, conv_tol=1e-4):
    """Damped quadrature with regulator ``exp(-eps |u|^2)``, extrapolated to eps -> 0.

    ``M`` is diagonalized by an orthogonal change of variables (which
    preserves both the measure and the regulator), so the ``m``-dimensional
    integral is a product of one-dimensional quadratures.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if not det_clears(M):
        raise FresnelDegenerate("M is singular")
    eps_list = tuple(eps_list)
    lam, O = np.linalg.eigh(0.5 * (M + M.T))
    w = O.T @ v
    vals = [np.prod([damped_fresnel_1d(l, wi, e) for l, wi in zip(lam, w)]) for e in eps_list]
    if len(vals) == 1:
        return complex(vals[0])
    rows = richardson(vals, eps_list)
    best = rows[-1][0]
    spread = abs(best - rows[-2][-1])
    if spread > conv_tol:
        raise NumericalFailure("Richardson extrapolation did not settle",
                               {"values": vals, "spread": spread, "eps": eps_list})
    return complex(best)
