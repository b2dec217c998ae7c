# Composing Mehlig-Wilkinson operators
#
# R_nu(S) R_nu'(S') = R_nu''(SS') with nu'' = nu + nu' + n - Inert(M + M').
# The truncated-basis oracle multiplies the two operator matrices and
# reads off which of the four candidate indices matches.  A general
# symplectic matrix is then split into two free, fixed-point-free factors,
# which is how an index is attached to a matrix that is not free.

import numpy as np

from metasymp import indices as ix
from metasymp import symplectic as sp
from metasymp.weyl import basis

squeeze = np.diag([np.exp(0.2), np.exp(-0.2)])
S1 = basis.rotation(0.9) @ squeeze
S2 = basis.rotation(2.1)
D1, D2 = sp.MWDescriptor(S1, 1), sp.MWDescriptor(S2, 3)
print("predicted nu'' =", basis.composition_prediction(D1, D2))
k, res = basis.composition_oracle(D1, D2, 64)
print(f"oracle nu''    = {k} (residual {res:.1e})")

# the determinant identity behind the formula
I = np.eye(2)
lhs = np.linalg.det(S1 - I) * np.linalg.det(S2 - I) * np.linalg.det(D1.M + D2.M)
print("\ndet[(S1 - I)(S2 - I)(M1 + M2)] =", lhs, " det(S1 S2 - I) =", np.linalg.det(S1 @ S2 - I))

# a non-free matrix (B = 0) split into free factors
S = np.diag([2.0, 0.5])
W1, W2 = sp.split_into_free_pair(S)
M1 = sp.cayley_M(sp.matrix_from_generator(W1))
M2 = sp.cayley_M(sp.matrix_from_generator(W2))
nu = ix.compose_nu(ix.nu_from_generator(W1), ix.nu_from_generator(W2), M1, M2, 1)
print("\nsplit of diag(2, 1/2): Q1 =", W1.Q.ravel(), " P2 =", W2.P.ravel())
print("nu of the product =", nu, " arg-det relation:", ix.check_arg_det_relation(S, nu))
