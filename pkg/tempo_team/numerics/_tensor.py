# -*- coding: utf-8 -*-
"""
Dense float64 tensors and the reverse-mode gradient tape.

Every op is a :class:`Function` subclass with an explicit ``forward`` and
``backward``. Calling a function on tensors that require gradients records a
:class:`TapeNode` on the output; :func:`backward` walks those nodes in reverse
topological order, visiting each one exactly once.
"""

import typing as ty

import numpy as np

__all__ = (
    'ShapeError',
    'NonFiniteError',
    'Tensor',
    'Function',
    'TapeNode',
    'GradientMap',
    'backward',
    'constant',
)

GradientMap = ty.Dict['Tensor', np.ndarray]


class ShapeError(ValueError):
    """Raised when operand shapes are incompatible."""


class NonFiniteError(ValueError):
    """Raised when an op produces NaN or infinite values."""


def _check_finite(array: np.ndarray, where: str) -> None:
    if not np.all(np.isfinite(array)):
        raise NonFiniteError(f'{where}: produced non-finite values')


class Tensor:
    """
    A dense, row-major array of float64 values.

    ``requires_grad`` marks trainable parameters and inputs-of-interest; only
    those appear in the gradient map returned by :func:`backward`.
    """
    __slots__ = ('data', 'requires_grad', 'name', 'node')

    def __init__(self, data, requires_grad: bool = False, name: ty.Optional[str] = None):
        array = np.array(data, dtype=np.float64, order='C')
        _check_finite(array, name or 'tensor')
        self.data = array
        self.requires_grad = requires_grad
        self.name = name
        self.node: ty.Optional[TapeNode] = None

    @classmethod
    def _from_op(cls, array: np.ndarray, node: ty.Optional['TapeNode']) -> 'Tensor':
        tensor = cls.__new__(cls)
        tensor.data = array
        tensor.requires_grad = node is not None
        tensor.name = None
        tensor.node = node
        return tensor

    @property
    def shape(self) -> ty.Tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return int(self.data.size)

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeError(f'item() needs a single-element tensor, got shape {self.shape}')
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.data.copy()

    def detach(self) -> 'Tensor':
        return Tensor(self.data)

    @property
    def T(self) -> 'Tensor':  # pylint: disable=invalid-name
        from ._ops import transpose  # pylint: disable=import-outside-toplevel
        return transpose(self)

    def __matmul__(self, other: 'Tensor') -> 'Tensor':
        from ._ops import matmul  # pylint: disable=import-outside-toplevel
        return matmul(self, other)

    def __add__(self, other: 'Tensor') -> 'Tensor':
        from ._ops import add  # pylint: disable=import-outside-toplevel
        return add(self, other)

    def __sub__(self, other: 'Tensor') -> 'Tensor':
        from ._ops import sub  # pylint: disable=import-outside-toplevel
        return sub(self, other)

    def __mul__(self, other: ty.Union['Tensor', float]) -> 'Tensor':
        from ._ops import mul, scale  # pylint: disable=import-outside-toplevel
        if isinstance(other, Tensor):
            return mul(self, other)
        return scale(self, float(other))

    __rmul__ = __mul__

    def __neg__(self) -> 'Tensor':
        from ._ops import scale  # pylint: disable=import-outside-toplevel
        return scale(self, -1.0)

    def __repr__(self) -> str:
        label = f' {self.name!r}' if self.name else ''
        return f'<Tensor{label} shape={self.shape} requires_grad={self.requires_grad}>'


def constant(data) -> Tensor:
    """Wrap data as a tensor that never receives a gradient."""
    return Tensor(data)


class TapeNode:
    """One recorded op: the function instance and the tensors it consumed."""
    __slots__ = ('function', 'inputs')

    def __init__(self, function: 'Function', inputs: ty.Tuple[Tensor, ...]):
        self.function = function
        self.inputs = inputs


class Function:
    """
    Base class of every differentiable op.

    Subclasses implement ``forward`` on numpy arrays and ``backward`` mapping the
    output gradient to one gradient per input. A fresh instance is used per call,
    so the instance may keep whatever the backward pass needs.
    """
    name = 'function'

    def __call__(self, *inputs: Tensor) -> Tensor:
        output = self.forward(*(tensor.data for tensor in inputs))
        _check_finite(output, self.name)
        if any(tensor.requires_grad for tensor in inputs):
            return Tensor._from_op(output, TapeNode(self, inputs))  # pylint: disable=protected-access
        return Tensor._from_op(output, None)  # pylint: disable=protected-access

    def forward(self, *arrays: np.ndarray) -> np.ndarray:
        raise NotImplementedError()

    def backward(self, grad: np.ndarray) -> ty.Sequence[ty.Optional[np.ndarray]]:
        raise NotImplementedError()


def _topological_order(root: Tensor) -> ty.List[Tensor]:
    """Tensors reachable from ``root`` through recorded nodes, inputs first."""
    order: ty.List[Tensor] = []
    visited: ty.Set[int] = set()
    stack: ty.List[ty.Tuple[Tensor, bool]] = [(root, False)]
    while stack:
        tensor, expanded = stack.pop()
        if expanded:
            order.append(tensor)
            continue
        if id(tensor) in visited:
            continue
        visited.add(id(tensor))
        stack.append((tensor, True))
        if tensor.node is not None:
            for parent in tensor.node.inputs:
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
    return order


def backward(loss: Tensor) -> GradientMap:
    """
    Compute the gradient of a scalar ``loss`` with respect to every leaf tensor
    that requires gradients (trainable parameters and registered inputs).

    Tensors that do not require gradients are absent from the returned map.
    """
    if loss.size != 1:
        raise ShapeError(f'backward needs a scalar loss, got shape {loss.shape}')
    grads: ty.Dict[int, np.ndarray] = {}
    result: GradientMap = {}
    if not loss.requires_grad:
        return result
    grads[id(loss)] = np.ones_like(loss.data)
    for tensor in reversed(_topological_order(loss)):
        grad = grads.pop(id(tensor), None)
        if grad is None:
            continue
        if tensor.node is None:
            result[tensor] = grad
            continue
        input_grads = tensor.node.function.backward(grad)
        for parent, parent_grad in zip(tensor.node.inputs, input_grads):
            if parent_grad is None or not parent.requires_grad:
                continue
            if id(parent) in grads:
                grads[id(parent)] = grads[id(parent)] + parent_grad
            else:
                grads[id(parent)] = parent_grad
    return result
