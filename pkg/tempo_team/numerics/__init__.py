# -*- coding: utf-8 -*-
"""
Dense float64 tensors, the op vocabulary, a reverse-mode gradient tape and the
Adam optimiser used to train every model in the package.
"""

from ._tensor import *
from ._ops import *
from ._params import *
from ._optim import *
from ._gradcheck import *

__all__ = (  # noqa: F405
    _tensor.__all__ + _ops.__all__ + _params.__all__ + _optim.__all__ + _gradcheck.__all__
)
