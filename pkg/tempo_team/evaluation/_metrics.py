# -*- coding: utf-8 -*-
"""
Member-level metrics of one team's predictions.
"""

import numpy as np

__all__ = ('acc_at_1', 'acc_at_last', 'mse')


def _pair(pred, truth):
    pred = np.asarray(pred, dtype=np.float64).reshape(-1)
    truth = np.asarray(truth, dtype=np.float64).reshape(-1)
    if pred.shape != truth.shape:
        raise ValueError(f'{pred.size} predictions for {truth.size} labels.')
    return pred, truth


def acc_at_1(pred, truth) -> int:
    """1 when the top-predicted member is the top-labeled one; ties go to the lowest index."""
    pred, truth = _pair(pred, truth)
    if pred.size < 2:
        raise ValueError(f'ACC@1 needs at least 2 members, got {pred.size}.')
    return int(np.argmax(pred) == np.argmax(truth))


def acc_at_last(pred, truth) -> int:
    """1 when the bottom-predicted member is the bottom-labeled one; ties go to the lowest index."""
    pred, truth = _pair(pred, truth)
    if pred.size < 2:
        raise ValueError(f'ACC@Last needs at least 2 members, got {pred.size}.')
    return int(np.argmin(pred) == np.argmin(truth))


def mse(pred, truth) -> float:
    pred, truth = _pair(pred, truth)
    if not pred.size:
        raise ValueError('MSE of an empty team.')
    return float(np.mean((pred - truth)**2))
