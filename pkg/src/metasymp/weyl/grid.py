"""Grid realizations (n = 1) of Heisenberg-Weyl and metaplectic operators.

Functions live on the periodic grid ``x_j = -x_max + j dx``, ``dx = 2 x_max / N``.
Integral operators are discretized with trapezoid weights, which on a
periodic grid are just ``dx``; for smooth rapidly decaying integrands this
is spectrally accurate provided the grid resolves the kernel's chirp.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError, GridOverflow
from ..symplectic import det_clears
from ..tolerances import DEFAULTS

__all__ = [
    "GridFunction", "grid_points", "hermite_functions", "hw_apply",
    "sigma", "hw_commutation_check", "KernelOperator",
    "quad_fourier_operator", "quad_fourier_apply", "mw_operator",
    "mw_apply_grid", "covariance_residual", "tail_mass",
]

DEFAULT_N = 1024
DEFAULT_XMAX = 12.0


def grid_points(x_max, N):
    return -x_max + (2.0 * x_max / N) * np.arange(N)


@dataclass(frozen=True)
class GridFunction:
    """Complex samples of a function on ``[-x_max, x_max)``."""

    x_max: float
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        v.setflags(write=False)
        N = v.shape[0]
        if v.ndim != 1 or N < 2 or N & (N - 1):
            raise DimensionError(f"N must be a power of two, got {v.shape}")
        if self.x_max <= 0:
            raise ValueError("x_max must be positive")
        object.__setattr__(self, "x_max", float(self.x_max))
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, func, x_max=DEFAULT_XMAX, N=DEFAULT_N):
        return cls(x_max, func(grid_points(x_max, N)))

    @property
    def N(self):
        return self.values.shape[0]

    @property
    def dx(self):
        return 2.0 * self.x_max / self.N

    @property
    def x(self):
        return grid_points(self.x_max, self.N)

    def norm(self):
        return float(np.sqrt(self.dx * np.sum(np.abs(self.values) ** 2)))

    def inner(self, other):
        """``<self, other>``, antilinear in the first slot."""
        return complex(self.dx * np.vdot(self.values, other.values))

    def like(self, values):
        return GridFunction(self.x_max, values)

    def __add__(self, other):
        return self.like(self.values + other.values)

    def __sub__(self, other):
        return self.like(self.values - other.values)

    def __mul__(self, c):
        return self.like(self.values * c)

    __rmul__ = __mul__

    def to_json(self):
        return json.dumps({"x_max": self.x_max, "N": self.N,
                           "re": self.values.real.tolist(), "im": self.values.imag.tolist()})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        f = cls(d["x_max"], np.asarray(d["re"]) + 1j * np.asarray(d["im"]))
        if f.N != d["N"]:
            raise DimensionError("declared N does not match sample count")
        return f


def tail_mass(f, band=0.05):
    """Fraction of ``||f||^2`` in the outer ``band`` of the grid on each side."""
    w = np.abs(f.values) ** 2
    total = w.sum()
    if total == 0:
        return 0.0
    edge = np.abs(f.x) >= (1.0 - band) * f.x_max
    return float(w[edge].sum() / total)


def _check_tail(f, limit=DEFAULTS["tail_mass"]):
    t = tail_mass(f)
    if t > limit:
        raise GridOverflow(f"tail mass {t:.2e} at the grid edge exceeds {limit:.0e}",
                           {"tail_mass": t, "x_max": f.x_max})


def hermite_functions(n_max, x):
    """Oscillator eigenfunctions ``h_0 .. h_{n_max-1}`` sampled at ``x``.

    Normalized three-term recurrence run on rescaled values; the Gaussian
    factor and accumulated scale live in a separate log array so neither
    underflow at large ``|x|`` nor overflow at large ``k`` occurs.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max,) + x.shape)
    logscale = -0.5 * x * x - 0.25 * np.log(np.pi)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(n_max):
        out[k] = cur * np.exp(logscale)
        nxt = np.sqrt(2.0 / (k + 1)) * x * cur - np.sqrt(k / (k + 1.0)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e100
        if np.any(big):
            s = np.where(big, 1e-100, 1.0)
            cur = cur * s
            prev = prev * s
            logscale = logscale - np.log(s)
    return out


def _spectral_shift(values, shift, dx):
    k = 2.0 * np.pi * np.fft.fftfreq(values.shape[0], dx)
    return np.fft.ifft(np.fft.fft(values) * np.exp(-1j * k * shift))


def hw_apply(z0, f):
    """Heisenberg-Weyl operator ``T(z0) f(x) = exp(i(p0 x - p0 x0 / 2)) f(x - x0)``.

    The translation is done spectrally, so it is exactly unitary on the
    grid and needs no rounding of ``x0``.
    """
    x0, p0 = (float(c) for c in np.ravel(z0))
    if abs(x0) > 0.5 * f.x_max:
        raise GridOverflow(f"shift |x0|={abs(x0):.3g} exceeds x_max/2", {"x0": x0})
    shifted = _spectral_shift(f.values, x0, f.dx) if x0 else f.values
    return f.like(np.exp(1j * (p0 * f.x - 0.5 * p0 * x0)) * shifted)


def sigma(z, zp):
    """``sigma(z, z') = <p, x'> - <p', x>`` for ``z = (x, p)``."""
    z = np.ravel(z)
    zp = np.ravel(zp)
    n = z.shape[0] // 2
    return float(z[n:] @ zp[:n] - zp[n:] @ z[:n])


def hw_commutation_check(z0, z1, f):
    """Relative residuals of the two Heisenberg-Weyl product rules.

    Returns ``(r1, r2)`` for ``T0 T1 = e^{i s} T1 T0`` and
    ``T(z0 + z1) = e^{-i s / 2} T0 T1`` with ``s = sigma(z0, z1)``.
    """
    z0 = np.ravel(z0).astype(float)
    z1 = np.ravel(z1).astype(float)
    s = sigma(z0, z1)
    t01 = hw_apply(z0, hw_apply(z1, f))
    t10 = hw_apply(z1, hw_apply(z0, f))
    tsum = hw_apply(z0 + z1, f)
    nf = f.norm()
    r1 = (t01 - t10 * np.exp(1j * s)).norm() / nf
    r2 = (tsum - t01 * np.exp(-0.5j * s)).norm() / nf
    return r1, r2


class KernelOperator:
    """Integral operator with a precomputed weighted kernel matrix.

    ``K[i, j]`` already includes the quadrature weight ``dx``, so applying
    the operator is a matrix-vector product.
    """

    def __init__(self, K, x_max, check_tails=True):
        self.K = K
        self.x_max = float(x_max)
        self.check_tails = check_tails

    @property
    def N(self):
        return self.K.shape[0]

    def __call__(self, f):
        if f.N != self.N or f.x_max != self.x_max:
            raise DimensionError("grid function does not match the operator grid")
        if self.check_tails:
            _check_tail(f)
        return f.like(self.K @ f.values)

    def apply_columns(self, V):
        return self.K @ V

    def scaled(self, c):
        return KernelOperator(c * self.K, self.x_max, self.check_tails)


def _require_n1(n):
    if n != 1:
        raise DimensionError("grid numerics are implemented for n = 1 only")


def quad_fourier_operator(W, x_max=DEFAULT_XMAX, N=DEFAULT_N, m=None):
    """Kernel ``(2 pi i)^(-1/2) i^m sqrt|L| exp(i W(x, y))`` on the grid.

    The square root is the principal branch,
    ``(2 pi i)^(-1/2) = (2 pi)^(-1/2) exp(-i pi/4)``.
    """
    _require_n1(W.n)
    m = W.m if m is None else m
    if m is None:
        raise ValueError("quadratic Fourier transform needs a Maslov index m")
    P, L, Q = float(W.P[0, 0]), float(W.L[0, 0]), float(W.Q[0, 0])
    x = grid_points(x_max, N)
    dx = 2.0 * x_max / N
    X, Y = np.meshgrid(x, x, indexing="ij")
    pref = (2 * np.pi) ** -0.5 * np.exp(-0.25j * np.pi) * 1j ** m * np.sqrt(abs(L))
    K = pref * dx * np.exp(1j * (0.5 * P * X * X - L * X * Y + 0.5 * Q * Y * Y))
    return KernelOperator(K, x_max)


def quad_fourier_apply(W, f, m=None):
    """Apply the quadratic Fourier transform ``S_{W,m}`` to ``f``."""
    return quad_fourier_operator(W, f.x_max, f.N, m)(f)


def _spectral_interp_matrix(x_max, N, t):
    """Matrix evaluating the periodic trigonometric interpolant at points ``t``."""
    dx = 2.0 * x_max / N
    k = 2.0 * np.pi * np.fft.fftfreq(N, dx)
    j = np.arange(N)
    # f(t) = (1/N) sum_k F_k exp(i k (t + x_max)),  F_k = sum_j f_j exp(-i k j dx)
    E = np.exp(1j * np.outer(t + x_max, k)) / N
    F = np.exp(-1j * np.outer(k, j * dx))
    return E @ F


def mw_operator(D, x_max=DEFAULT_XMAX, N=DEFAULT_N):
    """Grid kernel of ``R_nu(S) = (2 pi)^-1 i^nu |det(S-I)|^-1/2 int e^{i/2 <M z,z>} T(z) dz``.

    The momentum integral is done in closed form.  Writing
    ``M_S = [[a, b], [b, c]]``:

    * ``c != 0``: the Fresnel formula leaves a chirp kernel
      ``exp(i(alpha x^2 + beta x y + gamma y^2))`` for the remaining
      position integral;
    * ``c = 0``: the momentum integral is a delta function and the
      operator collapses to ``i^nu sqrt|k| e^{i a x0^2 / 2} f(k x)`` with
      ``k = (b + 1/2)/(b - 1/2)`` and ``x0 = x / (1/2 - b)``; off-grid
      values of ``f`` come from trigonometric interpolation.
    """
    _require_n1(D.n)
    a, b, c = D.M[0, 0], D.M[0, 1], D.M[1, 1]
    x = grid_points(x_max, N)
    dx = 2.0 * x_max / N
    phase_nu = 1j ** D.nu
    if det_clears([[c]]):
        pref = ((2 * np.pi) ** -0.5 * phase_nu / np.sqrt(abs(D.detSmI))
                * abs(c) ** -0.5 * np.exp(0.25j * np.pi * np.sign(c)))
        alpha = 0.5 * a - (b + 0.5) ** 2 / (2 * c)
        beta = -a + (b * b - 0.25) / c
        gamma = 0.5 * a - (b - 0.5) ** 2 / (2 * c)
        X, Y = np.meshgrid(x, x, indexing="ij")
        K = pref * dx * np.exp(1j * (alpha * X * X + beta * X * Y + gamma * Y * Y))
    else:
        kappa = (b + 0.5) / (b - 0.5)
        x0 = x / (0.5 - b)
        diag = phase_nu * np.sqrt(abs(kappa)) * np.exp(0.5j * a * x0 * x0)
        if np.isclose(kappa, -1.0, rtol=0, atol=1e-14):
            # reflection x -> -x is a permutation of the periodic grid
            perm = (-np.arange(N)) % N
            K = np.zeros((N, N), dtype=complex)
            K[np.arange(N), perm] = diag
        else:
            K = diag[:, None] * _spectral_interp_matrix(x_max, N, kappa * x)
    return KernelOperator(K, x_max)


def mw_apply_grid(D, f):
    """Apply the Mehlig-Wilkinson operator of descriptor ``D`` to ``f``."""
    return mw_operator(D, f.x_max, f.N)(f)


def covariance_residual(apply_S, S, z, f):
    """``||apply_S(T(z) f) - T(S z) apply_S(f)|| / ||f||``."""
    Sz = np.asarray(S, dtype=float) @ np.ravel(z).astype(float)
    lhs = apply_S(hw_apply(z, f))
    rhs = hw_apply(Sz, apply_S(f))
    return (lhs - rhs).norm() / f.norm()
