"""Metaplectic operators in Weyl form: symplectic algebra, index arithmetic and numerics."""

from .errors import *  # noqa: F401,F403
from .indices import *  # noqa: F401,F403
from .symplectic import *  # noqa: F401,F403
from .harness import SuiteConfig, SuiteReport, run_all, run_suite  # noqa: F401
from . import weyl  # noqa: F401

__version__ = "0.1.0"
