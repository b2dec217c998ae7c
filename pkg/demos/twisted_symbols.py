# Twisted convolution of phase-space symbols
#
# An operator can be written as (2 pi)^-1 int a(z) T(z) dz; the function a
# is its twisted symbol.  Products of operators correspond to the twisted
# convolution of symbols.  Two Gaussian symbols are convolved on a lattice,
# compared with the closed form, and the composition law is checked by
# applying both sides to a wave function.

import numpy as np

from metasymp.weyl import twisted
from metasymp.weyl.gaussian import GaussianState

pg = twisted.PhaseGrid(0.25, 32)
X, P = pg.mesh()
Z = np.stack([X, P], -1)


def gaussian_symbol(A, alpha):
    return np.exp(-0.5 * np.einsum("...i,ij,...j->...", Z, A, Z) + Z @ alpha)


Aa, alpha = np.array([[1.2, 0.2], [0.2, 0.9]]), np.array([0.3j, -0.2])
Ab, beta = np.eye(2), np.array([0.1, 0.4j])
a, b = gaussian_symbol(Aa, alpha), gaussian_symbol(Ab, beta)

c = twisted.twisted_convolution(a, b, pg)
closed = twisted.twisted_gaussian_closed(Aa, alpha, Ab, beta, Z)
print("lattice vs closed form:", np.max(np.abs(c - closed)) / np.max(np.abs(closed)))

f = GaussianState((0.2, 0.0), 1.0).sample(16.0, 512)
lhs = twisted.weyl_from_twisted(twisted.compose_twisted(a, b, pg), pg, f)
rhs = twisted.weyl_from_twisted(a, pg, twisted.weyl_from_twisted(b, pg, f))
print("operator product vs composed symbol:", (lhs - rhs).norm() / rhs.norm())
