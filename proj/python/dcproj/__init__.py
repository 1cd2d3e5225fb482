"""Discourse-connective annotation projection through word alignments."""

from ._dcproj import *  # noqa: F401,F403
from ._dcproj import FormatError, IoError, __doc__  # noqa: F401

__version__ = "0.1.0"
