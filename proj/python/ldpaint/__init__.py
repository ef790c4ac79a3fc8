"""Layered-depth stroke planning, rendering and two-arm scheduling."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
