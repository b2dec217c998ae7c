"""Central table of default tolerances.

Library defaults, harness suites and the acceptance tests all read from
``DEFAULTS`` so the numbers cannot drift apart.
"""

from types import MappingProxyType

TOL_SYMP = 1e-10
TOL_DET = 1e-8
ZERO_TOL_REL = 1e-8

DEFAULTS = MappingProxyType({
    # symplectic_core
    "symplectic": 1e-9,
    "det_identity": 1e-9,
    "cayley_symmetry": 1e-10,
    "cayley_roundtrip": 1e-8,
    "momentum_pairing": 1e-9,
    "split_product": 1e-9,
    # index_calculus
    "product_det": 1e-8,
    # weyl_numerics
    "hw": 1e-10,
    "covariance": 1e-5,
    "maslov_operator": 1e-5,
    "altforms": 1e-8,
    "fresnel": 1e-6,
    "trace": 5e-3,
    "trace_pi": 1e-3,
    "compose": 1e-3,
    "twisted": 1e-4,
    "unitarity": 1e-6,
    "quarter_unitarity": 1e-4,
    "tail_mass": 1e-6,
})
