"""Closed-form action of phase-space integrals on Gaussian states (n = 1).

Every operator of the form ``int F(z) T(K z) dz`` with a Gaussian weight
``F`` maps a Gaussian to a Gaussian.  The integrand, as a function of
``v = (x0, p0, x)``, is ``exp(1/2 v^T H v + g^T v + k)``; integrating out
``(x0, p0)`` is a complex Gaussian integral whose square-root branch is
fixed by continuity from the convergent case (product of principal roots of
the eigenvalues, which all have positive real part here).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError, NumericalFailure
from .grid import GridFunction, grid_points

__all__ = [
    "GaussianState", "mw_apply_gaussian", "mw_apply_gaussian_shift_form",
    "mw_apply_gaussian_product_form", "alt_forms_residual", "gaussian_l2_distance",
]


@dataclass(frozen=True)
class GaussianState:
    """``g(x) = exp(phase - width/2 (x - x0)^2 + i p0 (x - x0))``.

    ``center = (x0, p0)``; ``width`` is complex with positive real part;
    ``phase`` is the complex log-amplitude.
    """

    center: tuple
    width: complex
    phase: complex = 0j

    def __post_init__(self):
        x0, p0 = (float(c) for c in self.center)
        if complex(self.width).real <= 0:
            raise ValueError("width must have positive real part")
        object.__setattr__(self, "center", (x0, p0))
        object.__setattr__(self, "width", complex(self.width))
        object.__setattr__(self, "phase", complex(self.phase))

    @classmethod
    def standard(cls, center=(0.0, 0.0)):
        """Normalized ground state ``pi^(-1/4) exp(-x^2/2)`` moved to ``center``."""
        return cls(center, 1.0, -0.25 * np.log(np.pi))

    @classmethod
    def from_coefficients(cls, A, B, C):
        """From ``exp(A x^2 + B x + C)``."""
        w = -2.0 * complex(A)
        if w.real <= 0:
            raise NumericalFailure("output Gaussian is not normalizable", {"A": A})
        B = complex(B)
        x0 = B.real / w.real
        p0 = B.imag - w.imag * x0
        phase = complex(C) - (-0.5 * w * x0 * x0 - 1j * p0 * x0)
        return cls((x0, p0), w, phase)

    def coefficients(self):
        x0, p0 = self.center
        w = self.width
        return -0.5 * w, w * x0 + 1j * p0, self.phase - 0.5 * w * x0 * x0 - 1j * p0 * x0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        x0, p0 = self.center
        return np.exp(self.phase - 0.5 * self.width * (x - x0) ** 2 + 1j * p0 * (x - x0))

    def norm(self):
        """Closed-form L2 norm."""
        return float(np.exp(self.phase.real) * (np.pi / self.width.real) ** 0.25)

    def sample(self, x_max=12.0, N=1024):
        return GridFunction(x_max, self(grid_points(x_max, N)))

    def times(self, c):
        return GaussianState(self.center, self.width, self.phase + np.log(complex(c)))


# variable order in the integrand
_X0, _P0, _X = np.eye(3)


class _QuadraticExponent:
    """``exp(1/2 v^T H v + g^T v + k)`` with ``v = (x0, p0, x)``."""

    def __init__(self):
        self.H = np.zeros((3, 3), dtype=complex)
        self.g = np.zeros(3, dtype=complex)
        self.k = 0j

    def bilinear(self, coef, l1, l2):
        """Add ``coef * (l1 . v)(l2 . v)``."""
        self.H += coef * (np.outer(l1, l2) + np.outer(l2, l1))

    def gaussian(self, g, l):
        """Add the log of ``g(l . v)``."""
        A, B, C = g.coefficients()
        self.H += 2 * A * np.outer(l, l)
        self.g += B * np.asarray(l)
        self.k += C

    def integrate_phase_space(self):
        """Integrate over ``(x0, p0)``; return the resulting ``GaussianState``."""
        Q = -self.H[:2, :2]
        hx = self.H[:2, 2]
        gu = self.g[:2]
        lam = np.linalg.eigvals(Q)
        if np.min(np.abs(lam)) < 1e-14 * max(1.0, np.max(np.abs(lam))):
            raise NumericalFailure("phase-space Gaussian integral is degenerate", {"eig": lam})
        Qi = np.linalg.inv(Q)
        A = 0.5 * self.H[2, 2] + 0.5 * hx @ Qi @ hx
        B = self.g[2] + hx @ Qi @ gu
        C = self.k + 0.5 * gu @ Qi @ gu + np.log(2 * np.pi) - 0.5 * np.sum(np.log(lam))
        return GaussianState.from_coefficients(A, B, C)


def _apply_T(expr, wx, wp, inner):
    """Add ``T(w)`` applied on top of a function evaluated at ``x``.

    ``wx, wp`` are linear forms in ``v``.  ``inner(expr, arg)`` must add the
    log of the inner function evaluated at the linear form ``arg``.
    Returns nothing; ``T(w) h(x) = exp(i(wp x - wp wx / 2)) h(x - wx)``.
    """
    expr.bilinear(1j, wp, _X)
    expr.bilinear(-0.5j, wp, wx)
    # caller supplies the argument x - wx through ``inner``
    inner(expr, _X - wx)


def _check_n1(D):
    if D.n != 1:
        raise DimensionError("closed-form Gaussian action is implemented for n = 1")


def mw_apply_gaussian(D, g):
    """Exact ``R_nu(S) g`` from the Weyl integral with weight ``e^{i/2 <M_S z, z>}``."""
    _check_n1(D)
    e = _QuadraticExponent()
    e.H[:2, :2] += 1j * D.M
    _apply_T(e, _X0, _P0, lambda ex, arg: ex.gaussian(g, arg))
    out = e.integrate_phase_space()
    return out.times((1 / (2 * np.pi)) * 1j ** D.nu / np.sqrt(abs(D.detSmI)))


def mw_apply_gaussian_shift_form(D, g):
    """``(2 pi)^-1 i^nu |det(S-I)|^1/2 int e^{-i/2 sigma(Sz, z)} T((S-I) z) dz`` on ``g``."""
    _check_n1(D)
    S = np.asarray(D.S)
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    e = _QuadraticExponent()
    # -1/2 sigma(Sz, z) = 1/2 z^T S^T J z
    G = S.T @ J
    e.H[:2, :2] += 1j * 0.5 * (G + G.T)
    K = S - np.eye(2)
    wx = np.array([K[0, 0], K[0, 1], 0.0])
    wp = np.array([K[1, 0], K[1, 1], 0.0])
    _apply_T(e, wx, wp, lambda ex, arg: ex.gaussian(g, arg))
    out = e.integrate_phase_space()
    return out.times((1 / (2 * np.pi)) * 1j ** D.nu * np.sqrt(abs(D.detSmI)))


def mw_apply_gaussian_product_form(D, g):
    """``(2 pi)^-1 i^nu |det(S-I)|^1/2 int T(Sz) T(-z) dz`` on ``g``.

    The two translations are composed directly, without the product rule.
    """
    _check_n1(D)
    S = np.asarray(D.S)
    e = _QuadraticExponent()
    ax = np.array([S[0, 0], S[0, 1], 0.0])
    ap = np.array([S[1, 0], S[1, 1], 0.0])

    def inner_T(ex, arg):
        # T(-z) g evaluated at ``arg``: exp(i(-p0 arg - p0 x0 / 2)) g(arg + x0)
        ex.bilinear(-1j, _P0, arg)
        ex.bilinear(-0.5j, _P0, _X0)
        ex.gaussian(g, arg + _X0)

    _apply_T(e, ax, ap, inner_T)
    out = e.integrate_phase_space()
    return out.times((1 / (2 * np.pi)) * 1j ** D.nu * np.sqrt(abs(D.detSmI)))


def gaussian_l2_distance(g1, g2, relative=True):
    """``||g1 - g2||`` by dense sampling around ``g1`` (no cancellation)."""
    s = max(1.0 / np.sqrt(g1.width.real), 1.0 / np.sqrt(g2.width.real))
    lo = min(g1.center[0], g2.center[0]) - 12 * s
    hi = max(g1.center[0], g2.center[0]) + 12 * s
    freq = max(abs(g.center[1]) + abs(g.width) * 12 * s for g in (g1, g2))
    npts = int(max(4001, 4 * (hi - lo) * freq / np.pi))
    x = np.linspace(lo, hi, npts)
    d = np.abs(g1(x) - g2(x)) ** 2
    dist = np.sqrt(np.trapezoid(d, x))
    return dist / g1.norm() if relative else dist


def alt_forms_residual(D, g):
    """Relative L2 residuals of the two alternative forms against the Weyl form."""
    ref = mw_apply_gaussian(D, g)
    return (gaussian_l2_distance(ref, mw_apply_gaussian_shift_form(D, g)),
            gaussian_l2_distance(ref, mw_apply_gaussian_product_form(D, g)))
