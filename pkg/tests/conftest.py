# -*- coding: utf-8 -*-
"""
Configuration file for pytest tests of tempo-team.
"""

pytest_plugins = ['tempo_team.testing']  # pylint: disable=invalid-name
