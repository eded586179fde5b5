"""Python bindings for the chainwave harmonic-chain library."""

from ._chainwave import *  # noqa: F401,F403
from ._chainwave import ChainwaveError, __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
