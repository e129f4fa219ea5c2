"""Spectral square root of the Dirichlet Laplacian on intervals and rectangles."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
