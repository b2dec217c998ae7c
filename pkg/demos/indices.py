# The index nu of a quadratic Fourier transform
#
# The quadratic Fourier transform S_{W,m} carries a Maslov index m that
# fixes the square root of det L.  Written as a Weyl-type integral, the
# same operator gets the index nu = m - Inert(W_xx) mod 4.  We check that
# statement numerically on a Gaussian, phase included.

import numpy as np

from metasymp import indices as ix
from metasymp import symplectic as sp
from metasymp.weyl import grid
from metasymp.weyl.gaussian import GaussianState, mw_apply_gaussian

W = sp.FreeGenerator([[0.4]], [[0.8]], [[-0.3]], m=0)
S = sp.matrix_from_generator(W)
Wxx = sp.hessian_Wxx(W)
print("W_xx =", Wxx.ravel(), " Inert =", ix.inertia(Wxx).negatives)

g = GaussianState((0.5, -0.2), 1.0 + 0.2j)
f = g.sample()

for m in ix.maslov_choices(W.L):
    nu = ix.nu_from_generator(W, m)
    D = sp.MWDescriptor(S, nu)
    quad = grid.quad_fourier_apply(W, f, m)
    weyl = mw_apply_gaussian(D, g).sample()
    print(f"m = {m}: nu = {nu}, |S_Wm g - R_nu g| = {(quad - weyl).norm():.2e}, "
          f"arg-det relation holds: {ix.check_arg_det_relation(S, nu)}")

# the wrong index gives a visibly different operator
D_bad = sp.MWDescriptor(S, (ix.nu_from_generator(W) + 1) % 4)
print("with nu + 1:", (grid.quad_fourier_apply(W, f) - mw_apply_gaussian(D_bad, g).sample()).norm())

# parity of the Conley-Zehnder index from sign det(S - I)
print("\nmu_CZ mod 2 =", ix.cz_parity(S), " nu mod 2 =", ix.nu_from_generator(W) % 2)
