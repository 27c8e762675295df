# -*- coding: utf-8 -*-
"""Tempo-relational team modeling on snapshot temporal graphs."""

__version__ = '0.1.0.dev1'
