"""Semiclassical Monte Carlo for trapped Lennard-Jones particles in one dimension."""

from ._qpsmc import *  # noqa: F401,F403
from ._qpsmc import __doc__  # noqa: F401
