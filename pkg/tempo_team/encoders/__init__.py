# -*- coding: utf-8 -*-
"""
Encoders turning a dynamic team into one social embedding per member: a
per-member FFNN (``snn``), temporal attention (``tnn``), a GCN on the
time-aggregated graph (``renn``) and GCN-then-attention (``trenn``).
"""

from ._spec import *
from ._layers import *
from ._encode import *

__all__ = _spec.__all__ + _layers.__all__ + _encode.__all__  # noqa: F405
