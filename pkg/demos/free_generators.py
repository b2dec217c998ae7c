# Free symplectic matrices and their generating functions
#
# A symplectic matrix whose upper-right block is invertible is "free": it
# comes from a quadratic form W(x, x') = 1/2 Px.x - Lx.x' + 1/2 Qx'.x'.
# This script builds one, checks the determinant formula for det(S - I),
# and factors it into shears, a dilation and J.

import numpy as np

from metasymp import symplectic as sp

np.set_printoptions(precision=4, suppress=True)

# The simplest free matrix: W(x, x') = -x x' generates J.
W_J = sp.FreeGenerator([[0.0]], [[1.0]], [[0.0]], m=0)
print("S for W = -x x':\n", np.asarray(sp.matrix_from_generator(W_J)))

# A random free matrix in four dimensions (n = 2).
W = sp.random_free(2, seed=11)
S = np.asarray(sp.matrix_from_generator(W))
print("\nrandom S_W:\n", S)
print("symplectic:", sp.is_symplectic(S))

# det(S_W - I) three ways: directly, from the generator, and from eigenvalues.
print("\ndet(S - I) directly      :", np.linalg.det(S - np.eye(4)))
print("from P, L, Q             :", sp.det_S_minus_I(W))
print("product of (lambda - 1)  :", np.prod(np.linalg.eigvals(S) - 1).real)

# Inverse generator and the product of four elementary factors.
Wi = sp.generator_inverse(W)
print("\nS_W S_W* = I:", np.allclose(S @ np.asarray(sp.matrix_from_generator(Wi)), np.eye(4)))
factors = [np.asarray(f) for f in sp.free_factorization(W)]
print("factor product residual:", np.max(np.abs(np.linalg.multi_dot(factors) - S)))

# The symmetric Cayley-type matrix and the way back.
M = sp.cayley_M(S)
print("\nM_S symmetric:", np.allclose(M, M.T))
print("round trip residual:", np.max(np.abs(np.asarray(sp.inverse_cayley(M)) - S)))
