"""Linear TD(lambda) learners, random MRPs and experiment harness."""

from ._tdkit import *  # noqa: F401,F403
from ._tdkit import __doc__  # noqa: F401

__version__ = "0.1.0"
