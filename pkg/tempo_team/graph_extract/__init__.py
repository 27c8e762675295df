# -*- coding: utf-8 -*-
"""
Turns interaction-event streams (or the synthetic generator) into segmented
dynamic teams, and reads/writes the dataset interchange format.
"""

from ._types import *
from ._segment import *
from ._synth import *
from ._io import *

__all__ = _types.__all__ + _segment.__all__ + _synth.__all__ + _io.__all__  # noqa: F405
