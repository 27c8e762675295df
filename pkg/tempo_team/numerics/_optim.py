# -*- coding: utf-8 -*-
"""
Adaptive-moment (Adam) parameter updates.
"""

import dataclasses
import typing as ty

import numpy as np

from ._params import ParamStore
from ._tensor import GradientMap, ShapeError

__all__ = ('AdamState', 'adam_step')


@dataclasses.dataclass
class AdamState:
    """First and second moment estimates, keyed by parameter name."""
    step: int = 0
    first: ty.Dict[str, np.ndarray] = dataclasses.field(default_factory=dict)
    second: ty.Dict[str, np.ndarray] = dataclasses.field(default_factory=dict)

    @classmethod
    def for_params(cls, params: ParamStore) -> 'AdamState':
        return cls(
            first={name: np.zeros(tensor.shape) for name, tensor in params.items()},
            second={name: np.zeros(tensor.shape) for name, tensor in params.items()},
        )


def adam_step(
    params: ParamStore,
    grads: GradientMap,
    state: AdamState,
    lr: float = 1e-3,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> AdamState:  # pylint: disable=too-many-arguments
    """
    Apply one bias-corrected Adam update to ``params`` in place.

    Parameters absent from ``grads`` are treated as having a zero gradient.
    Returns the updated state.
    """
    if lr <= 0:
        raise ValueError(f'Learning rate must be positive, got {lr}.')
    step = state.step + 1
    first: ty.Dict[str, np.ndarray] = {}
    second: ty.Dict[str, np.ndarray] = {}
    for name, tensor in params.items():
        prev_first = state.first.get(name, np.zeros(tensor.shape))
        prev_second = state.second.get(name, np.zeros(tensor.shape))
        if prev_first.shape != tensor.shape or prev_second.shape != tensor.shape:
            raise ShapeError(
                f"Adam state for '{name}' has shape {prev_first.shape}, parameter has shape {tensor.shape}"
            )
        grad = grads.get(tensor, np.zeros(tensor.shape))
        first[name] = beta1 * prev_first + (1.0 - beta1) * grad
        second[name] = beta2 * prev_second + (1.0 - beta2) * grad * grad
        first_hat = first[name] / (1.0 - beta1**step)
        second_hat = second[name] / (1.0 - beta2**step)
        tensor.data = tensor.data - lr * first_hat / (np.sqrt(second_hat) + eps)
    return AdamState(step=step, first=first, second=second)
