"""Simulation and analytics for geometric Brownian motion under Poissonian
stochastic resetting."""

from ._srgbm import *  # noqa: F401,F403
from ._srgbm import __version__  # noqa: F401
