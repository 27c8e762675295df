# -*- coding: utf-8 -*-
"""
Central finite differences for checking the analytic gradients of the tape.
"""

import typing as ty

import numpy as np

from ._tensor import Tensor, backward

__all__ = ('central_difference', 'check_gradients')


def central_difference(f: ty.Callable[[], Tensor], tensor: Tensor, epsilon: float = 1e-4) -> np.ndarray:
    """
    Approximate the derivative of the scalar ``f()`` with respect to every entry
    of ``tensor`` by perturbing its data in place and restoring it afterwards.
    """
    numeric = np.zeros(tensor.shape)
    tensor.data = np.ascontiguousarray(tensor.data)
    flat = tensor.data.reshape(-1)
    for index in range(flat.size):
        original = flat[index]
        flat[index] = original + epsilon
        upper = f().item()
        flat[index] = original - epsilon
        lower = f().item()
        flat[index] = original
        numeric.reshape(-1)[index] = (upper - lower) / (2.0 * epsilon)
    return numeric


def check_gradients(
    f: ty.Callable[[], Tensor],
    tensors: ty.Sequence[Tensor],
    epsilon: float = 1e-4,
    rtol: float = 1e-3,
    atol: float = 1e-6,
) -> float:
    """
    Compare the analytic gradient of ``f()`` with central differences for each
    tensor. Returns the worst relative error; raises ``AssertionError`` naming
    the tensor when an entry is outside ``atol + rtol * |reference|``.
    """
    grads = backward(f())
    worst = 0.0
    for tensor in tensors:
        analytic = grads.get(tensor, np.zeros(tensor.shape))
        numeric = central_difference(f, tensor, epsilon=epsilon)
        scale = np.maximum(np.abs(analytic), np.abs(numeric))
        error = np.abs(analytic - numeric)
        if np.any(error > atol + rtol * scale):
            raise AssertionError(
                f'Gradient mismatch for {tensor!r}: analytic {analytic.tolist()} vs numeric {numeric.tolist()}'
            )
        relative = error / np.maximum(scale, atol)
        worst = max(worst, float(relative.max(initial=0.0)))
    return worst
