# -*- coding: utf-8 -*-
"""
Check the analytic gradient of every op against central differences on random
shapes and values.
"""

import numpy as np
import pytest

from tempo_team.numerics import (
    ShapeError, Tensor, add, concat_cols, concat_rows, constant, exp, matmul, mean_all, mean_rows, mul, relu, scale,
    softmax_rows, stack_mean, sub, take_cols, take_rows, total, transpose
)


def _param(rng, *shape, low=-1.0, high=1.0):
    return Tensor(rng.uniform(low, high, size=shape), requires_grad=True)


def _away_from_zero(rng, *shape):
    values = rng.uniform(-1.0, 1.0, size=shape)
    return Tensor(values + np.sign(values) * 0.1, requires_grad=True)


def _dims(rng, count):
    return [int(value) for value in rng.integers(1, 5, size=count)]


def _matmul(rng):
    n, k, m = _dims(rng, 3)
    left, right = _param(rng, n, k), _param(rng, k, m)
    return [left, right], lambda: matmul(left, right)


def _elementwise(function, allow_scalar):

    def _build(rng):
        n, d = _dims(rng, 2)
        shapes = [(n, d), (1, d)] + ([(1, 1)] if allow_scalar else [])
        left, right = _param(rng, n, d), _param(rng, *shapes[rng.integers(len(shapes))])
        return [left, right], lambda: function(left, right)

    return _build


def _unary(function, maker=_param):

    def _build(rng):
        tensor = maker(rng, *_dims(rng, 2))
        return [tensor], lambda: function(tensor)

    return _build


def _concat(function, axis):

    def _build(rng):
        shared = _dims(rng, 1)[0]
        tensors = []
        for extent in _dims(rng, int(rng.integers(1, 4))):
            shape = (extent, shared) if axis == 0 else (shared, extent)
            tensors.append(_param(rng, *shape))
        return tensors, lambda: function(tensors)

    return _build


def _take(function, axis):

    def _build(rng):
        n, d = _dims(rng, 2)
        tensor = _param(rng, n, d)
        extent = (n, d)[axis]
        indices = [int(index) for index in rng.integers(0, extent, size=int(rng.integers(1, 6)))]
        return [tensor], lambda: function(tensor, indices)

    return _build


def _stack_mean(rng):
    n, d = _dims(rng, 2)
    tensors = [_param(rng, n, d) for _ in range(int(rng.integers(1, 4)))]
    return tensors, lambda: stack_mean(tensors)


BUILDERS = {
    'matmul': _matmul,
    'add': _elementwise(add, allow_scalar=False),
    'sub': _elementwise(sub, allow_scalar=False),
    'mul': _elementwise(mul, allow_scalar=True),
    'scale': _unary(lambda tensor: scale(tensor, -2.5)),
    'relu': _unary(relu, maker=_away_from_zero),
    'exp': _unary(exp),
    'softmax_rows': _unary(softmax_rows, maker=lambda rng, *shape: _param(rng, *shape, low=-3.0, high=3.0)),
    'transpose': _unary(transpose),
    'concat_rows': _concat(concat_rows, axis=0),
    'concat_cols': _concat(concat_cols, axis=1),
    'take_rows': _take(take_rows, axis=0),
    'take_cols': _take(take_cols, axis=1),
    'mean_rows': _unary(mean_rows),
    'stack_mean': _stack_mean,
    'total': _unary(total),
    'mean_all': _unary(mean_all),
}


@pytest.mark.parametrize('op_name', sorted(BUILDERS))
def test_op_gradients(op_name, gradcheck, gradcheck_cases):
    """
    The gradient of a random weighted sum of the op output matches central
    differences for every input.
    """
    for case in range(gradcheck_cases):
        rng = np.random.default_rng(case)
        tensors, function = BUILDERS[op_name](rng)
        weights = constant(rng.normal(size=function().shape))
        gradcheck(lambda function=function, weights=weights: total(mul(function(), weights)), tensors)


def test_composite_gradient(gradcheck):
    """A small network mixing most ops has correct gradients."""
    rng = np.random.default_rng(7)
    inputs = _param(rng, 4, 3)
    weight = _param(rng, 3, 2)
    bias = _param(rng, 1, 2)

    def _network():
        hidden = softmax_rows(add(matmul(inputs, weight), bias))
        pooled = mean_rows(concat_rows([hidden, exp(scale(hidden, 0.5))]))
        return total(mul(pooled, pooled))

    gradcheck(_network, [inputs, weight, bias])


@pytest.mark.parametrize(
    'function', [
        lambda: matmul(constant(np.ones((2, 3))), constant(np.ones((2, 3)))),
        lambda: add(constant(np.ones((2, 3))), constant(np.ones((2, 2)))),
        lambda: add(constant(np.ones((2, 3))), constant(np.ones((1, 1)))),
        lambda: mul(constant(np.ones((2, 3))), constant(np.ones((3, 1)))),
        lambda: concat_rows([constant(np.ones((2, 3))), constant(np.ones((2, 2)))]),
        lambda: stack_mean([constant(np.ones((2, 3))), constant(np.ones((3, 2)))]),
        lambda: take_rows(constant(np.ones((2, 3))), [2]),
        lambda: mean_rows(constant(np.ones((0, 3)))),
        lambda: matmul(constant(np.ones(3)), constant(np.ones((3, 1)))),
    ]
)
def test_shape_errors(function):
    """Incompatible operands raise a shape error instead of broadcasting."""
    with pytest.raises(ShapeError):
        function()


def test_softmax_is_stable():
    """Large logits do not overflow, and every row sums to one."""
    out = softmax_rows(constant([[1000.0, 1001.0, 1002.0], [-1000.0, 0.0, 1000.0]])).numpy()
    np.testing.assert_allclose(out.sum(axis=1), 1.0)
    assert np.all(np.isfinite(out))


def test_forward_literals():
    """Uniform rows soften to equal weights and the identity leaves a matrix unchanged."""
    np.testing.assert_allclose(softmax_rows(constant([[0.0, 0.0]])).data, [[0.5, 0.5]])
    x = np.random.default_rng(7).normal(size=(3, 4))
    np.testing.assert_array_equal(matmul(constant(np.eye(3)), constant(x)).data, x)
