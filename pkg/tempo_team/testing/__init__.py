# -*- coding: utf-8 -*-
"""
A pytest plugin for testing team models. Enable it with
``pytest_plugins = ['tempo_team.testing']`` in ``conftest.py``.
"""

from ._fixtures import *

__all__ = _fixtures.__all__  # noqa: F405
