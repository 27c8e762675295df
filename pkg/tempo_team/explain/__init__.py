# -*- coding: utf-8 -*-
"""
Explanations of team predictions: gradient saliency maps (factual) and
edge-removal searches (counterfactual).
"""

from ._factual import *
from ._render import *
from ._counterfactual import *

__all__ = _factual.__all__ + _render.__all__ + _counterfactual.__all__  # noqa: F405
