"""Index arithmetic mod 4: inertia, Maslov choices, nu and its composition.

All indices are returned as Python ints reduced to ``{0, 1, 2, 3}``; they
only ever enter through ``i**nu``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    CompositionDegenerate,
    DegenerateHessian,
    FixedPointError,
    NotFree,
    SymmetryError,
)
from .symplectic import (
    cayley_M,
    det_clears,
    hessian_Wxx,
    matrix_from_generator,
)
from .tolerances import TOL_SYMP, ZERO_TOL_REL

__all__ = [
    "InertiaData", "inertia", "maslov_choices", "nu_from_generator",
    "check_arg_det_relation", "cz_parity", "compose_nu", "product_det_check",
    "product_det_sides",
]


class InertiaData(NamedTuple):
    negatives: int
    positives: int
    zeros: int

    @property
    def signature(self):
        return self.positives - self.negatives

    @property
    def degenerate(self):
        return self.zeros > 0


def inertia(R, zero_tol=None):
    """Count negative, positive and (numerically) zero eigenvalues of ``R``.

    Eigenvalues with ``|lam| <= zero_tol`` count as zero; by default
    ``zero_tol = 1e-8 * ||R||_2``.
    """
    R = np.atleast_2d(np.asarray(R, dtype=float))
    if R.shape[0] != R.shape[1]:
        raise SymmetryError("matrix must be square")
    if R.size and np.max(np.abs(R - R.T)) > TOL_SYMP * max(1.0, np.max(np.abs(R))):
        raise SymmetryError("matrix is not symmetric")
    lam = np.linalg.eigvalsh(0.5 * (R + R.T))
    if zero_tol is None:
        zero_tol = ZERO_TOL_REL * (np.max(np.abs(lam)) if lam.size else 0.0)
    zeros = int(np.sum(np.abs(lam) <= zero_tol))
    neg = int(np.sum(lam < -zero_tol))
    return InertiaData(neg, len(lam) - neg - zeros, zeros)


def maslov_choices(L):
    """The two admissible ``m`` with ``m pi = arg det L (mod 2 pi)``."""
    L = np.atleast_2d(np.asarray(L, dtype=float))
    if not det_clears(L):
        raise NotFree("L is singular")
    return (0, 2) if np.linalg.det(L) > 0 else (1, 3)


def nu_from_generator(W, m=None):
    """``nu = m - Inert(W_xx) mod 4`` for ``R_nu(S_W) = S_{W,m}``."""
    m = W.m if m is None else m
    if m is None:
        raise ValueError("generator carries no Maslov index")
    Wxx = hessian_Wxx(W)
    if not det_clears(Wxx):
        raise DegenerateHessian("W_xx is singular, so det(S_W - I) = 0")
    return (int(m) - inertia(Wxx).negatives) % 4


def _sign_det_S_minus_I(S):
    S = np.asarray(S, dtype=float)
    E = S - np.eye(S.shape[0])
    if not det_clears(E):
        raise FixedPointError("det(S - I) = 0: S has eigenvalue 1")
    return 1 if np.linalg.det(E) > 0 else -1


def check_arg_det_relation(S, nu):
    """Parity form of ``arg det(S - I) / pi = n - nu (mod 2)``.

    True iff ``sign det(S - I) == (-1)**(n - nu)``.
    """
    n = np.asarray(S).shape[0] // 2
    return _sign_det_S_minus_I(S) == (-1) ** ((n - int(nu)) % 2)


def cz_parity(S, nu=None):
    """Parity of the Conley-Zehnder index from ``sign det(S - I)``.

    ``sign det(S - I) = (-1)**(n - mu_CZ)``.  When ``nu`` is given, the
    result is checked against ``nu = mu_CZ (mod 2)`` and an
    ``AssertionError`` is raised on contradiction.
    """
    n = np.asarray(S).shape[0] // 2
    sgn = _sign_det_S_minus_I(S)
    mu = (n + (0 if sgn > 0 else 1)) % 2
    if nu is not None and (int(nu) - mu) % 2:
        raise AssertionError(f"nu={nu} contradicts mu_CZ parity {mu}")
    return mu


def compose_nu(nu1, nu2, M1, M2, n=None):
    """Index of the product: ``nu1 + nu2 + n - Inert(M1 + M2) mod 4``."""
    Msum = np.asarray(M1, dtype=float) + np.asarray(M2, dtype=float)
    if n is None:
        n = Msum.shape[0] // 2
    if not det_clears(Msum):
        raise CompositionDegenerate("M1 + M2 singular: det(S1 S2 - I) = 0")
    return (int(nu1) + int(nu2) + int(n) - inertia(Msum).negatives) % 4


def product_det_sides(W1, W2):
    """``det[(S1 - I)(S2 - I)(M1 + M2)]`` and ``det(S1 S2 - I)``."""
    S1 = np.asarray(matrix_from_generator(W1))
    S2 = np.asarray(matrix_from_generator(W2))
    I = np.eye(S1.shape[0])
    lhs = np.linalg.det(S1 - I) * np.linalg.det(S2 - I) * np.linalg.det(cayley_M(S1) + cayley_M(S2))
    rhs = np.linalg.det(S1 @ S2 - I)
    return float(lhs), float(rhs)


def product_det_check(W1, W2, rtol=1e-8):
    """True iff both sides of the determinant identity agree to ``rtol``.

    The comparison is relative to ``max(|lhs|, |rhs|, 1)``, so a pair with
    ``det(S1 S2 - I) = 0`` passes when both sides are near zero.
    """
    lhs, rhs = product_det_sides(W1, W2)
    return abs(lhs - rhs) <= rtol * max(abs(lhs), abs(rhs), 1.0)
