# Trace of R_nu(S) for rotations
#
# For a rotation by theta the operator R_3(S) acts on the oscillator
# eigenfunctions as e^{-i theta (k + 1/2)}, and its (regularized) trace is
# i^3 / sqrt|det(S - I)| = 1 / (2 i sin(theta / 2)).  The operator is
# assembled in a truncated Hermite basis and the diagonal is summed with a
# smooth cutoff; the plain partial sum of a unimodular geometric series
# would not converge.

import numpy as np

from metasymp import symplectic as sp
from metasymp.weyl import basis

print(" theta     trace (N=128)                 exact                       error")
for theta in np.linspace(np.pi / 4, 7 * np.pi / 4, 8):
    D = sp.MWDescriptor(basis.rotation(theta), 3)
    tr = basis.trace_mw(D, 128)
    exact = 1j ** 3 / np.sqrt(abs(D.detSmI))
    print(f"{theta:6.3f}  {tr:.10f}  {exact:.10f}  {abs(tr - exact):.2e}")

print("\nconvergence at theta = pi/4:")
D = sp.MWDescriptor(basis.rotation(np.pi / 4), 3)
exact = 1j ** 3 / np.sqrt(abs(D.detSmI))
for nb in (32, 64, 128, 256):
    print(f"  N_basis = {nb:3d}: error {abs(basis.trace_mw(D, nb) - exact):.2e}")
