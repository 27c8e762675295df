# -*- coding: utf-8 -*-
"""
Nested leave-one-group-out evaluation: fold plans, metrics, training with early
stopping, multi-seed reports and efficiency comparisons.
"""

from ._folds import *
from ._metrics import *
from ._train import *
from ._report import *
from ._logo import *
from ._analysis import *

__all__ = (  # noqa: F405
    _folds.__all__ + _metrics.__all__ + _train.__all__ + _report.__all__ + _logo.__all__ + _analysis.__all__
)
