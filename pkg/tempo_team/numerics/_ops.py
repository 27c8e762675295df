# -*- coding: utf-8 -*-
"""
The op vocabulary of the gradient tape.

All ops work on 2-d tensors. Broadcasting is limited to adding a ``1 x d`` row
to every row of an ``n x d`` tensor and to multiplying by a ``1 x 1`` tensor.
"""

import typing as ty

import numpy as np

from ._tensor import Function, ShapeError, Tensor

__all__ = (
    'matmul',
    'add',
    'sub',
    'mul',
    'scale',
    'relu',
    'exp',
    'softmax_rows',
    'transpose',
    'concat_rows',
    'concat_cols',
    'take_rows',
    'take_cols',
    'mean_rows',
    'stack_mean',
    'total',
    'mean_all',
)


def _require_2d(name: str, *arrays: np.ndarray) -> None:
    for array in arrays:
        if array.ndim != 2:
            raise ShapeError(f'{name}: expected 2-d operands, got shape {array.shape}')


def _reduce_to(grad: np.ndarray, shape: ty.Tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast gradient back to the operand shape."""
    if grad.shape == shape:
        return grad
    if shape == (1, 1):
        return grad.sum().reshape(1, 1)
    return grad.sum(axis=0, keepdims=True)


def _broadcast_ok(left: ty.Tuple[int, ...], right: ty.Tuple[int, ...], allow_scalar: bool) -> bool:
    if left == right:
        return True
    if right == (1, left[1]):
        return True
    return allow_scalar and right == (1, 1)


class MatMul(Function):
    name = 'matmul'

    def forward(self, *arrays):
        left, right = arrays
        _require_2d(self.name, left, right)
        if left.shape[1] != right.shape[0]:
            raise ShapeError(f'matmul: shape mismatch {left.shape} @ {right.shape}')
        self.left, self.right = left, right
        return left @ right

    def backward(self, grad):
        return grad @ self.right.T, self.left.T @ grad


class Add(Function):
    name = 'add'

    def forward(self, *arrays):
        left, right = arrays
        _require_2d(self.name, left, right)
        if not _broadcast_ok(left.shape, right.shape, allow_scalar=False):
            raise ShapeError(f'add: shape mismatch {left.shape} + {right.shape}')
        self.right_shape = right.shape
        return left + right

    def backward(self, grad):
        return grad, _reduce_to(grad, self.right_shape)


class Sub(Function):
    name = 'sub'

    def forward(self, *arrays):
        left, right = arrays
        _require_2d(self.name, left, right)
        if not _broadcast_ok(left.shape, right.shape, allow_scalar=False):
            raise ShapeError(f'sub: shape mismatch {left.shape} - {right.shape}')
        self.right_shape = right.shape
        return left - right

    def backward(self, grad):
        return grad, -_reduce_to(grad, self.right_shape)


class Mul(Function):
    name = 'mul'

    def forward(self, *arrays):
        left, right = arrays
        _require_2d(self.name, left, right)
        if not _broadcast_ok(left.shape, right.shape, allow_scalar=True):
            raise ShapeError(f'mul: shape mismatch {left.shape} * {right.shape}')
        self.left, self.right = left, right
        return left * right

    def backward(self, grad):
        return grad * self.right, _reduce_to(grad * self.left, self.right.shape)


class Scale(Function):
    name = 'scale'

    def __init__(self, factor: float):
        self.factor = factor

    def forward(self, *arrays):
        return arrays[0] * self.factor

    def backward(self, grad):
        return (grad * self.factor, )


class Relu(Function):
    name = 'relu'

    def forward(self, *arrays):
        self.mask = arrays[0] > 0
        return np.where(self.mask, arrays[0], 0.0)

    def backward(self, grad):
        return (grad * self.mask, )


class Exp(Function):
    name = 'exp'

    def forward(self, *arrays):
        self.output = np.exp(arrays[0])
        return self.output

    def backward(self, grad):
        return (grad * self.output, )


class SoftmaxRows(Function):
    name = 'softmax_rows'

    def forward(self, *arrays):
        _require_2d(self.name, arrays[0])
        shifted = arrays[0] - arrays[0].max(axis=1, keepdims=True)
        weights = np.exp(shifted)
        self.output = weights / weights.sum(axis=1, keepdims=True)
        return self.output

    def backward(self, grad):
        inner = (grad * self.output).sum(axis=1, keepdims=True)
        return (self.output * (grad - inner), )


class Transpose(Function):
    name = 'transpose'

    def forward(self, *arrays):
        _require_2d(self.name, arrays[0])
        return arrays[0].T.copy()

    def backward(self, grad):
        return (grad.T.copy(), )


class Concat(Function):
    name = 'concat'

    def __init__(self, axis: int):
        self.axis = axis

    def forward(self, *arrays):
        if not arrays:
            raise ShapeError('concat: nothing to concatenate')
        _require_2d(self.name, *arrays)
        other = 1 - self.axis
        widths = {array.shape[other] for array in arrays}
        if len(widths) != 1:
            raise ShapeError(f'concat: shape mismatch {[array.shape for array in arrays]} along axis {self.axis}')
        self.splits = np.cumsum([array.shape[self.axis] for array in arrays])[:-1]
        return np.concatenate(arrays, axis=self.axis)

    def backward(self, grad):
        return tuple(np.split(grad, self.splits, axis=self.axis))


class Take(Function):
    name = 'take'

    def __init__(self, indices: ty.Sequence[int], axis: int):
        self.indices = np.asarray(indices, dtype=int)
        self.axis = axis

    def forward(self, *arrays):
        _require_2d(self.name, arrays[0])
        extent = arrays[0].shape[self.axis]
        if self.indices.size and (self.indices.min() < -extent or self.indices.max() >= extent):
            raise ShapeError(f'take: index out of range for shape {arrays[0].shape} along axis {self.axis}')
        self.input_shape = arrays[0].shape
        return np.take(arrays[0], self.indices, axis=self.axis)

    def backward(self, grad):
        full = np.zeros(self.input_shape)
        if self.axis == 0:
            np.add.at(full, self.indices, grad)
        else:
            np.add.at(full.T, self.indices, grad.T)
        return (full, )


class MeanRows(Function):
    name = 'mean_rows'

    def forward(self, *arrays):
        _require_2d(self.name, arrays[0])
        if arrays[0].shape[0] == 0:
            raise ShapeError('mean_rows: empty tensor')
        self.rows = arrays[0].shape[0]
        return arrays[0].mean(axis=0, keepdims=True)

    def backward(self, grad):
        return (np.repeat(grad / self.rows, self.rows, axis=0), )


class StackMean(Function):
    name = 'stack_mean'

    def forward(self, *arrays):
        if not arrays:
            raise ShapeError('stack_mean: nothing to average')
        shapes = {array.shape for array in arrays}
        if len(shapes) != 1:
            raise ShapeError(f'stack_mean: shape mismatch {sorted(shapes)}')
        self.count = len(arrays)
        return np.mean(np.stack(arrays), axis=0)

    def backward(self, grad):
        return tuple(grad / self.count for _ in range(self.count))


class Total(Function):
    name = 'total'

    def forward(self, *arrays):
        self.input_shape = arrays[0].shape
        return np.array([[arrays[0].sum()]])

    def backward(self, grad):
        return (np.full(self.input_shape, grad.item()), )


class MeanAll(Function):
    name = 'mean_all'

    def forward(self, *arrays):
        if arrays[0].size == 0:
            raise ShapeError('mean_all: empty tensor')
        self.input_shape = arrays[0].shape
        return np.array([[arrays[0].mean()]])

    def backward(self, grad):
        return (np.full(self.input_shape, grad.item() / np.prod(self.input_shape)), )


def matmul(left: Tensor, right: Tensor) -> Tensor:
    return MatMul()(left, right)


def add(left: Tensor, right: Tensor) -> Tensor:
    """Elementwise sum; ``right`` may also be a ``1 x d`` row added to every row."""
    return Add()(left, right)


def sub(left: Tensor, right: Tensor) -> Tensor:
    return Sub()(left, right)


def mul(left: Tensor, right: Tensor) -> Tensor:
    """Elementwise product; ``right`` may be a ``1 x d`` row or a ``1 x 1`` scalar."""
    return Mul()(left, right)


def scale(tensor: Tensor, factor: float) -> Tensor:
    return Scale(factor)(tensor)


def relu(tensor: Tensor) -> Tensor:
    return Relu()(tensor)


def exp(tensor: Tensor) -> Tensor:
    return Exp()(tensor)


def softmax_rows(tensor: Tensor) -> Tensor:
    """Row-wise softmax, stabilised by subtracting each row's maximum."""
    return SoftmaxRows()(tensor)


def transpose(tensor: Tensor) -> Tensor:
    return Transpose()(tensor)


def concat_rows(tensors: ty.Sequence[Tensor]) -> Tensor:
    return Concat(axis=0)(*tensors)


def concat_cols(tensors: ty.Sequence[Tensor]) -> Tensor:
    return Concat(axis=1)(*tensors)


def take_rows(tensor: Tensor, indices: ty.Sequence[int]) -> Tensor:
    return Take(indices, axis=0)(tensor)


def take_cols(tensor: Tensor, indices: ty.Sequence[int]) -> Tensor:
    return Take(indices, axis=1)(tensor)


def mean_rows(tensor: Tensor) -> Tensor:
    """Average over rows, giving a ``1 x d`` tensor."""
    return MeanRows()(tensor)


def stack_mean(tensors: ty.Sequence[Tensor]) -> Tensor:
    """Elementwise mean of equally shaped tensors."""
    return StackMean()(*tensors)


def total(tensor: Tensor) -> Tensor:
    """Sum of all entries as a ``1 x 1`` tensor."""
    return Total()(tensor)


def mean_all(tensor: Tensor) -> Tensor:
    """Mean of all entries as a ``1 x 1`` tensor."""
    return MeanAll()(tensor)
