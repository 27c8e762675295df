# -*- coding: utf-8 -*-
"""
The ``tempo-team`` command line interface.
"""

from ._cli import *

__all__ = _cli.__all__  # noqa: F405
