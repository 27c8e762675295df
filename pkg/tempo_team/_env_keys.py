# -*- coding: utf-8 -*-
"""
Defines the environment variable names read by the ``tempo-team`` command.
"""

from enum import Enum


class EnvKeys(Enum):
    """
    An enum containing the environment variables that override
    command line defaults.
    """
    CONFIG = 'TEMPO_TEAM_CONFIG'
    JOBS = 'TEMPO_TEAM_JOBS'
    LOG_LEVEL = 'TEMPO_TEAM_LOG_LEVEL'
