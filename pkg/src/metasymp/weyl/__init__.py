"""Grid, closed-form Gaussian and truncated-basis realizations of the operators (n = 1)."""

from .basis import *  # noqa: F401,F403
from .fresnel import *  # noqa: F401,F403
from .gaussian import *  # noqa: F401,F403
from .grid import *  # noqa: F401,F403
from .twisted import *  # noqa: F401,F403
