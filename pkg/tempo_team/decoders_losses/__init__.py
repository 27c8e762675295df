# -*- coding: utf-8 -*-
"""
Prediction heads mapping social embeddings to construct scores, and the loss
stack: MSE, pairwise ranking and the exp-weighted multi-task combination.
"""

from ._heads import *
from ._losses import *

__all__ = _heads.__all__ + _losses.__all__  # noqa: F405
