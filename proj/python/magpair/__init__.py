"""Field-induced magnetic dipole-dipole interaction between two multi-level dipoles."""

from ._magpair import *  # noqa: F401,F403
from ._magpair import __doc__  # noqa: F401

__version__ = "0.1.0"
