"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`MetasympError`, so callers can catch the whole family at once.
Domain errors (a matrix with eigenvalue one, a degenerate Hessian) are
distinguished from numerical ones (an under-resolved grid) because the CLI
maps them to different exit codes.
"""


class MetasympError(Exception):
    """Base class for all package errors."""


class DomainError(MetasympError, ValueError):
    """Input lies outside the set where an identity is defined."""


class DimensionError(DomainError):
    pass


class SymmetryError(DomainError):
    pass


class NotSymplecticError(DomainError):
    pass


class NotFree(DomainError):
    """Upper-right block ``B`` of a symplectic matrix is singular."""


class InvalidGenerator(DomainError):
    pass


class FixedPointError(DomainError):
    """``det(S - I) = 0``: the matrix has eigenvalue one."""


class CayleyDomainError(DomainError):
    """``det(M - J/2) = 0``: no symplectic matrix maps to ``M``."""


class DegenerateHessian(DomainError):
    pass


class CompositionDegenerate(DomainError):
    """``M1 + M2`` is singular, equivalently ``det(S1 S2 - I) = 0``."""


class FresnelDegenerate(DomainError):
    pass


class DecompositionError(MetasympError):
    pass


class NumericalFailure(MetasympError):
    """A quadrature or extrapolation did not converge.

    ``diagnostics`` carries whatever the failing routine measured.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class GridOverflow(NumericalFailure):
    """A shift or a function's support does not fit on the grid."""


class UnknownSuite(MetasympError, KeyError):
    pass
