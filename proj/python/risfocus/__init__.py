# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the risfocus RIS simulator."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
