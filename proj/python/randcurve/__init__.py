"""Brownian curve geometry: path sampling, self-intersection local times,
bounded-cost transport and interacting attractor flows."""

from randcurve._core import *  # noqa: F401,F403
from randcurve._core import __doc__ as _core_doc

__doc__ = _core_doc
__version__ = "0.1.0"
