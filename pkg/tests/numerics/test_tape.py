# -*- coding: utf-8 -*-
"""
Tests for the reverse-mode tape: gradient maps, shared subexpressions and
non-finite values.
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from tempo_team.numerics import (
    NonFiniteError, ShapeError, Tensor, add, backward, constant, exp, matmul, mul, scale, softmax_rows, total
)


def test_shared_subexpression():
    """A tensor used twice receives the sum of both gradient contributions."""
    x = Tensor([[1.0, -2.0, 3.0]], requires_grad=True)
    squared = mul(x, x)
    grads = backward(total(add(squared, squared)))
    np.testing.assert_allclose(grads[x], 4.0 * x.data)


def test_diamond_graph():
    """Gradients flowing through two branches that rejoin are accumulated once per path."""
    x = Tensor([[2.0]], requires_grad=True)
    left = scale(x, 3.0)
    right = mul(x, x)
    grads = backward(total(mul(left, right)))
    # d/dx 3 x^3
    np.testing.assert_allclose(grads[x], [[36.0]])


def test_long_chain():
    """Deep graphs are walked without recursion limits."""
    x = Tensor([[1.0]], requires_grad=True)
    out = x
    for _ in range(5000):
        out = add(out, x)
    grads = backward(total(out))
    np.testing.assert_allclose(grads[x], [[5001.0]])


def test_only_leaves_requiring_grad():
    """Constants and intermediate results are absent from the gradient map."""
    weight = Tensor(np.eye(2), requires_grad=True)
    inputs = constant(np.ones((3, 2)))
    hidden = matmul(inputs, weight)
    grads = backward(total(hidden))
    assert set(grads) == {weight}
    np.testing.assert_allclose(grads[weight], np.full((2, 2), 3.0))


def test_no_gradient_required():
    """A loss built from constants only yields an empty map."""
    assert not backward(total(constant(np.ones((2, 2)))))


def test_backward_needs_scalar():
    """The tape only differentiates single-element losses."""
    with pytest.raises(ShapeError):
        backward(Tensor(np.ones((2, 2)), requires_grad=True))


def test_non_finite_input():
    """Tensors refuse NaN and infinite data."""
    with pytest.raises(NonFiniteError):
        Tensor([[np.nan]])
    with pytest.raises(NonFiniteError):
        Tensor([[np.inf, 1.0]])


def test_non_finite_op():
    """An op producing an overflow raises instead of propagating infinities."""
    with np.errstate(over='ignore'), pytest.raises(NonFiniteError):
        exp(constant([[1000.0]]))


@given(
    hnp.arrays(
        np.float64,
        hnp.array_shapes(min_dims=2, max_dims=2, max_side=5),
        elements=st.floats(-50.0, 50.0),
    ),
    st.floats(-100.0, 100.0),
)
def test_softmax_shift_invariant(logits, shift):
    """Rows are distributions, unchanged by adding a constant to every logit."""
    out = softmax_rows(constant(logits)).numpy()
    shifted = softmax_rows(constant(logits + shift)).numpy()
    np.testing.assert_allclose(out.sum(axis=1), 1.0)
    np.testing.assert_allclose(out, shifted, atol=1e-9)


def test_backward_is_linear():
    """The gradient of a * L1 + b * L2 is a * grad L1 + b * grad L2."""
    rng = np.random.default_rng(4)
    x = Tensor(rng.uniform(-1.0, 1.0, size=(2, 3)), requires_grad=True)

    def first():
        return total(mul(x, x))

    def second():
        return total(exp(x))

    combined = backward(add(scale(first(), 2.5), scale(second(), -0.5)))
    np.testing.assert_allclose(combined[x], 2.5 * backward(first())[x] - 0.5 * backward(second())[x])


def test_square_gradient_literal():
    """d/dW sum(W * W) at W = [[3]] is [[6]]."""
    w = Tensor([[3.0]], requires_grad=True)
    np.testing.assert_array_equal(backward(total(mul(w, w)))[w], [[6.0]])
