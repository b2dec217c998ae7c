"""Symplectic linear algebra: free generators, the Cayley-type map, splits.

Conventions
-----------
Phase space points are ``z = (x, p)`` with ``x, p`` in R^n.  The standard
symplectic matrix is ``J = [[0, I], [-I, 0]]`` and the symplectic form is
``sigma(z, z') = <J z, z'> = <p, x'> - <p', x>``.

A free symplectic matrix ``S = [[A, B], [C, D]]`` (``det B != 0``) is
generated by the quadratic form

    W(x, x') = 1/2 <P x, x> - <L x, x'> + 1/2 <Q x', x'>

with ``P = D B^-1``, ``L = B^-1``, ``Q = B^-1 A``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as _cartesian

import numpy as np

from .errors import (
    CayleyDomainError,
    DecompositionError,
    DimensionError,
    FixedPointError,
    DegenerateHessian,
    InvalidGenerator,
    NotFree,
    NotSymplecticError,
)
from .tolerances import TOL_DET, TOL_SYMP

__all__ = [
    "SymplecticMatrix", "FreeGenerator", "MWDescriptor",
    "standard_J", "is_symplectic", "symplectic_inverse", "blocks",
    "generator_from_free", "matrix_from_generator", "generator_inverse",
    "cayley_M", "inverse_cayley", "hessian_Wxx", "det_S_minus_I",
    "momentum_pairing", "free_factorization", "split_into_free_pair",
    "random_free", "random_symplectic", "det_clears",
    "symplectic_to_json", "generator_to_json", "descriptor_to_json", "load_json_object",
]


def det_clears(X, tol=TOL_DET):
    """True when ``X`` is invertible with margin ``tol``.

    The test is ``sigma_min(X) > tol * max(1, sigma_max(X))`` on singular
    values, so it neither rejects large well-conditioned matrices nor
    accepts tiny nearly singular ones.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.size == 0:
        return True
    sv = np.linalg.svd(X, compute_uv=False)
    return bool(sv[-1] > tol * max(1.0, sv[0]))


def _readonly(a, dtype=float):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def _half_dim(S):
    S = np.asarray(S)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        raise DimensionError(f"expected a square even-dimensional matrix, got shape {S.shape}")
    return S.shape[0] // 2


def standard_J(n):
    """The ``2n x 2n`` matrix ``[[0, I], [-I, 0]]``."""
    if n < 1:
        raise DimensionError("n must be >= 1")
    I = np.eye(n)
    Z = np.zeros((n, n))
    return SymplecticMatrix(np.block([[Z, I], [-I, Z]]))


def _J(n):
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]])


def is_symplectic(S, tol=TOL_SYMP):
    """Return True iff ``max|S^T J S - J| <= tol``."""
    S = np.asarray(S, dtype=float)
    n = _half_dim(S)
    J = _J(n)
    return float(np.max(np.abs(S.T @ J @ S - J))) <= tol


def symplectic_inverse(S):
    """``S^-1 = -J S^T J``, exact for symplectic ``S``."""
    S = np.asarray(S, dtype=float)
    J = _J(_half_dim(S))
    return SymplecticMatrix(-J @ S.T @ J)


def blocks(S):
    """Return the ``n x n`` blocks ``(A, B, C, D)`` of ``S``."""
    S = np.asarray(S)
    n = _half_dim(S)
    return S[:n, :n], S[:n, n:], S[n:, :n], S[n:, n:]


@dataclass(frozen=True)
class SymplecticMatrix:
    """Read-only wrapper around a real ``2n x 2n`` symplectic matrix.

    Behaves like an ndarray in numpy calls (``np.asarray(S)``) and
    supports ``@`` with other matrices.  Construction checks the
    symplectic condition against ``tol * max(1, ||S||_max)**2`` so that
    products of well-conditioned factors with larger entries still pass.
    """

    entries: np.ndarray
    tol: float = field(default=1e-9, repr=False, compare=False)

    def __post_init__(self):
        E = _readonly(self.entries)
        n = _half_dim(E)
        J = _J(n)
        scale = max(1.0, float(np.max(np.abs(E)))) ** 2
        err = float(np.max(np.abs(E.T @ J @ E - J)))
        if err > self.tol * scale:
            raise NotSymplecticError(f"||S^T J S - J||_max = {err:.3e}")
        object.__setattr__(self, "entries", E)

    @property
    def n(self):
        return self.entries.shape[0] // 2

    @property
    def A(self):
        return self.entries[:self.n, :self.n]

    @property
    def B(self):
        return self.entries[:self.n, self.n:]

    @property
    def C(self):
        return self.entries[self.n:, :self.n]

    @property
    def D(self):
        return self.entries[self.n:, self.n:]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def __matmul__(self, other):
        out = self.entries @ np.asarray(other)
        if isinstance(other, SymplecticMatrix):
            return SymplecticMatrix(out)
        return out

    def __rmatmul__(self, other):
        return np.asarray(other) @ self.entries

    def __eq__(self, other):
        return isinstance(other, SymplecticMatrix) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def inv(self):
        return symplectic_inverse(self.entries)

    def is_free(self, tol=TOL_DET):
        return det_clears(self.B, tol)


@dataclass(frozen=True)
class FreeGenerator:
    """Data ``(P, L, Q)`` of a generating quadratic form, plus Maslov index.

    ``m`` is optional; when present it is reduced mod 4 and must satisfy
    ``m pi = arg det L (mod 2 pi)``, i.e. be even iff ``det L > 0``.
    """

    P: np.ndarray
    L: np.ndarray
    Q: np.ndarray
    m: int | None = None

    def __post_init__(self):
        P = _readonly(np.atleast_2d(self.P))
        L = _readonly(np.atleast_2d(self.L))
        Q = _readonly(np.atleast_2d(self.Q))
        n = L.shape[0]
        if not (P.shape == L.shape == Q.shape == (n, n)):
            raise DimensionError("P, L, Q must all be n x n")
        if np.max(np.abs(P - P.T)) > TOL_SYMP or np.max(np.abs(Q - Q.T)) > TOL_SYMP:
            raise InvalidGenerator("P and Q must be symmetric")
        if not det_clears(L):
            raise InvalidGenerator("L is singular")
        m = self.m
        if m is not None:
            m = int(m) % 4
            if (m % 2 == 0) != (np.linalg.det(L) > 0):
                raise InvalidGenerator(f"m={m} is inconsistent with sign det L")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "m", m)

    @property
    def n(self):
        return self.L.shape[0]

    def with_m(self, m):
        return FreeGenerator(self.P, self.L, self.Q, m)

    def W(self, x, xp):
        """Evaluate the quadratic form at ``(x, x')``."""
        x = np.atleast_1d(x)
        xp = np.atleast_1d(xp)
        return 0.5 * x @ self.P @ x - (self.L @ x) @ xp + 0.5 * xp @ self.Q @ xp


def generator_from_free(S, m=None):
    """Generator ``(P, L, Q) = (D B^-1, B^-1, B^-1 A)`` of a free matrix."""
    A, B, C, D = blocks(np.asarray(S, dtype=float))
    if not det_clears(B):
        raise NotFree("upper-right block B is singular")
    Binv = np.linalg.inv(B)
    P = D @ Binv
    Q = Binv @ A
    # symmetric in exact arithmetic; strip roundoff
    return FreeGenerator(0.5 * (P + P.T), Binv, 0.5 * (Q + Q.T), m)


def matrix_from_generator(W):
    """Free symplectic matrix ``[[L^-1 Q, L^-1], [P L^-1 Q - L^T, P L^-1]]``."""
    try:
        Li = np.linalg.inv(W.L)
    except np.linalg.LinAlgError as exc:
        raise InvalidGenerator("L is singular") from exc
    P, L, Q = W.P, W.L, W.Q
    return SymplecticMatrix(np.block([[Li @ Q, Li], [P @ Li @ Q - L.T, P @ Li]]))


def generator_inverse(W):
    """Generator of the inverse: ``W*(x, x') = -W(x', x)``, ``m* = n - m``."""
    if W.m is None:
        raise InvalidGenerator("generator_inverse needs a Maslov index m")
    return FreeGenerator(-W.Q, -W.L.T, -W.P, (W.n - W.m) % 4)


def cayley_M(S):
    """Symmetric matrix ``M_S = 1/2 J (S + I)(S - I)^-1``."""
    S = np.asarray(S, dtype=float)
    n = _half_dim(S)
    I = np.eye(2 * n)
    if not det_clears(S - I):
        raise FixedPointError("det(S - I) = 0: S has eigenvalue 1")
    M = 0.5 * _J(n) @ (S + I) @ np.linalg.inv(S - I)
    return M


def inverse_cayley(M):
    """Recover ``S = (M - J/2)^-1 (M + J/2)`` from a symmetric ``M``."""
    M = np.asarray(M, dtype=float)
    n = _half_dim(M)
    J = _J(n)
    if not det_clears(M - 0.5 * J):
        raise CayleyDomainError("det(M - J/2) = 0")
    return SymplecticMatrix(np.linalg.solve(M - 0.5 * J, M + 0.5 * J))


def hessian_Wxx(W):
    """Hessian of ``x -> W(x, x)``: ``P + Q - L - L^T``."""
    return W.P + W.Q - W.L - W.L.T


def det_S_minus_I(W):
    """``det(S_W - I) = (-1)^n det(L^-1) det(P + Q - L - L^T)``."""
    return (-1) ** W.n * np.linalg.det(hessian_Wxx(W)) / np.linalg.det(W.L)


def momentum_pairing(S, p0):
    """Both sides of ``<M_S (0, p0), (0, p0)> = -<W_xx^-1 p0, p0>``.

    Returns ``(lhs, rhs)``.
    """
    S = np.asarray(S, dtype=float)
    n = _half_dim(S)
    p0 = np.atleast_1d(np.asarray(p0, dtype=float))
    W = generator_from_free(S)
    Wxx = hessian_Wxx(W)
    if not det_clears(Wxx):
        raise DegenerateHessian("W_xx is singular")
    z = np.concatenate([np.zeros(n), p0])
    lhs = float(z @ cayley_M(S) @ z)
    rhs = float(-p0 @ np.linalg.solve(Wxx, p0))
    return lhs, rhs


def _shear(R):
    n = R.shape[0]
    return SymplecticMatrix(np.block([[np.eye(n), np.zeros((n, n))], [R, np.eye(n)]]))


def free_factorization(W):
    """Matrices of ``V_{-P}``, ``M_L``, ``J``, ``V_{-Q}`` in product order.

    ``V_{-R} -> [[I, 0], [R, I]]`` and ``M_L -> [[L^-1, 0], [0, L^T]]``;
    the ordered product equals ``matrix_from_generator(W)``.
    """
    n = W.n
    Z = np.zeros((n, n))
    ML = SymplecticMatrix(np.block([[np.linalg.inv(W.L), Z], [Z, W.L.T]]))
    return [_shear(W.P), ML, standard_J(n), _shear(W.Q)]


def _default_m(L):
    return 0 if np.linalg.det(L) > 0 else 1


# lambda sweep for the P' + lambda, Q - lambda shift
_LAMBDAS = (0.5, -0.5, 1.0, -1.0, 1.7, -1.7, 2.3, -2.3)
# seed generators (0, I, mu I); mu = 0 is the J generator.  The left factor
# S S0^-1 then has upper-right block mu B - A, free for all but finitely many mu
_SEED_SHIFTS = (0.0, 0.5, -0.5, 1.0, -1.0, 1.7, -1.7, 2.3)


def split_into_free_pair(S, tol=TOL_DET, skip=0, max_attempts=64):
    """Write ``S = S_{W1} S_{W2}`` with both factors free and fixed-point free.

    A seed free matrix ``S0`` (the ``J`` generator or a shifted variant) is
    peeled off, ``S = (S S0^-1) S0``, and the left factor is made free.
    The pair is then moved along the family ``P2 -> P2 + lam``,
    ``Q1 -> Q1 - lam``, which leaves the product unchanged, until both
    ``det(S_Wi - I)`` clear ``tol``.

    Parameters
    ----------
    S : array_like
        Symplectic ``2n x 2n`` matrix.
    skip : int
        Return the ``skip``-th successful candidate in sweep order instead
        of the first; used to compare different splits of the same ``S``.
    max_attempts : int
        Bound on the number of (seed, lam) candidates examined.

    Returns
    -------
    (FreeGenerator, FreeGenerator)
        Generators carrying the even/odd default Maslov index.
    """
    S = np.asarray(S, dtype=float)
    n = _half_dim(S)
    I = np.eye(n)
    attempts = 0
    for mu, lam in _cartesian(_SEED_SHIFTS, _LAMBDAS):
        if attempts >= max_attempts:
            break
        attempts += 1
        seed = FreeGenerator(np.zeros((n, n)), I, mu * I)
        S0 = np.asarray(matrix_from_generator(seed))
        S1 = S @ np.asarray(symplectic_inverse(S0))
        if not det_clears(blocks(S1)[1], tol):
            continue
        W1 = generator_from_free(S1)
        W1 = FreeGenerator(W1.P, W1.L, W1.Q - lam * I)
        W2 = FreeGenerator(seed.P + lam * I, seed.L, seed.Q)
        if not (det_clears(hessian_Wxx(W1), tol) and det_clears(hessian_Wxx(W2), tol)):
            continue
        S_1 = np.asarray(matrix_from_generator(W1))
        S_2 = np.asarray(matrix_from_generator(W2))
        eye = np.eye(2 * n)
        if not (det_clears(S_1 - eye, tol) and det_clears(S_2 - eye, tol)):
            continue
        if skip > 0:
            skip -= 1
            continue
        return W1.with_m(_default_m(W1.L)), W2.with_m(_default_m(W2.L))
    raise DecompositionError(f"no admissible split after {attempts} attempts")


def _draw_free(n, rng, spread=1.5):
    def sym():
        X = rng.uniform(-1.0, 1.0, (n, n))
        return np.triu(X) + np.triu(X, 1).T

    P, Q = sym(), sym()
    while True:
        L = np.eye(n) + rng.uniform(-spread, spread, (n, n)) / max(1.0, np.sqrt(n))
        if abs(np.linalg.det(L)) > 0.1:
            break
    return FreeGenerator(P, L, Q, _default_m(L))


def random_free(n, seed):
    """Seeded random generator.

    ``P, Q`` symmetric with entries uniform in ``[-1, 1]``; ``L = I + E``
    with ``E`` uniform, redrawn until ``|det L| > 0.1``.  ``m`` is the
    smaller admissible Maslov index.  ``seed`` may be an int or a
    ``numpy.random.Generator``.
    """
    return _draw_free(n, np.random.default_rng(seed))


def random_symplectic(n, seed, k=3):
    """Product of ``k`` random free symplectic matrices."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = np.random.default_rng(seed)
    S = np.eye(2 * n)
    for _ in range(k):
        S = S @ np.asarray(matrix_from_generator(_draw_free(n, rng)))
    return SymplecticMatrix(S)


@dataclass(frozen=True)
class MWDescriptor:
    """A fixed-point-free symplectic matrix with its index ``nu`` mod 4.

    Caches the Cayley matrix ``M_S`` and ``det(S - I)``.
    """

    S: SymplecticMatrix
    nu: int
    M: np.ndarray = field(init=False, repr=False, compare=False)
    detSmI: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        S = self.S if isinstance(self.S, SymplecticMatrix) else SymplecticMatrix(self.S)
        E = np.asarray(S)
        d = float(np.linalg.det(E - np.eye(E.shape[0])))
        M = _readonly(cayley_M(E))  # raises FixedPointError
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "nu", int(self.nu) % 4)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "detSmI", d)

    @property
    def n(self):
        return self.S.n

    def with_nu(self, nu):
        return MWDescriptor(self.S, nu)


# JSON file formats

def _rows(a):
    return np.asarray(a, dtype=float).tolist()


def symplectic_to_json(S):
    S = np.asarray(S, dtype=float)
    return {"n": _half_dim(S), "rows": _rows(S)}


def generator_to_json(W):
    return {"n": W.n, "P": _rows(W.P), "L": _rows(W.L), "Q": _rows(W.Q), "m": W.m}


def descriptor_to_json(D):
    return {"n": D.n, "rows": _rows(D.S), "nu": D.nu}


def load_json_object(obj):
    """Decode a matrix, generator or descriptor from its JSON form.

    Accepts a dict, a JSON string or a path.  Objects with ``P/L/Q`` keys
    are generators; objects with ``rows`` are symplectic matrices, or
    descriptors when a ``nu`` key is present.
    """
    if isinstance(obj, str) and not obj.lstrip().startswith("{"):
        with open(obj) as fh:
            obj = json.load(fh)
    elif isinstance(obj, str):
        obj = json.loads(obj)
    if {"P", "L", "Q"} <= obj.keys():
        return FreeGenerator(obj["P"], obj["L"], obj["Q"], obj.get("m"))
    if "rows" in obj:
        S = SymplecticMatrix(np.array(obj["rows"], dtype=float))
        if obj.get("n") is not None and obj["n"] != S.n:
            raise DimensionError(f"declared n={obj['n']} but matrix has n={S.n}")
        if obj.get("nu") is not None:
            return MWDescriptor(S, obj["nu"])
        return S
    raise ValueError("unrecognized matrix JSON object")
