# -*- coding: utf-8 -*-
"""
Tests for the regression, ranking and multi-task losses.
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tempo_team.decoders_losses import (
    DegenerateRankingWarning, LossConfig, model_objective, mse_loss, mtl_loss, pairwise_ranking_loss, task_objective
)
from tempo_team.numerics import NonFiniteError, ShapeError, Tensor, backward, constant


def _column(values):
    return constant(np.asarray(values, dtype=np.float64).reshape(-1, 1))


def test_mse():
    assert mse_loss(_column([1.0, 2.0, 4.0]), [1.0, 0.0, 1.0]).item() == pytest.approx((0 + 4 + 9) / 3)
    with pytest.raises(ShapeError):
        mse_loss(_column([1.0, 2.0]), [1.0])


@pytest.mark.parametrize(
    'scores, labels, expected', [
        ([3.0, 1.0], [5.0, 2.0], 0.0),
        ([2.0, 2.0], [4.0, 1.0], 1.0),
        ([1.0, 2.0, 3.0], [2.0, 2.0, 2.0], 0.0),
        ([0.0, 0.5, 3.0], [3.0, 2.0, 1.0], (1.0 + 0.5) + (1.0 + 3.0) + (1.0 + 2.5)),
    ]
)
def test_ranking_loss(scores, labels, expected):
    """The hinge sums over strictly ordered label pairs only."""
    assert pairwise_ranking_loss(_column(scores), labels).item() == pytest.approx(expected)


def test_ranking_loss_degenerate():
    """A single member gives a zero loss and a warning rather than an error."""
    with pytest.warns(DegenerateRankingWarning):
        loss = pairwise_ranking_loss(_column([1.0]), [3.0])
    assert loss.item() == 0.0


@given(
    st.lists(st.floats(-10.0, 10.0), min_size=2, max_size=6),
    st.floats(-100.0, 100.0),
    st.randoms(use_true_random=False),
)
def test_ranking_shift_invariance(scores, shift, random):
    """Adding a constant to every score never changes the ranking loss."""
    labels = [float(random.randint(1, 5)) for _ in scores]
    base = pairwise_ranking_loss(_column(scores), labels).item()
    shifted = pairwise_ranking_loss(_column([score + shift for score in scores]), labels).item()
    assert shifted == pytest.approx(base, abs=1e-9 * (1.0 + abs(shift)) * len(scores)**2)


def test_mtl_loss_values():
    """Zero logits give a plain sum; a log-2 logit doubles its loss."""
    losses = [constant([[0.5]]), constant([[1.5]])]
    assert mtl_loss(losses, constant([[0.0, 0.0]])).item() == pytest.approx(2.0)
    assert mtl_loss([constant([[0.5]])], constant([[np.log(2.0)]])).item() == pytest.approx(1.0)


def test_mtl_loss_gradient(gradcheck):
    """The logit gradient is exp(alpha_i) * L_i."""
    alpha = Tensor([[0.3, -1.2, 0.0]], requires_grad=True)
    losses = [constant([[0.7]]), constant([[2.0]]), constant([[0.1]])]
    grads = backward(mtl_loss(losses, alpha))
    np.testing.assert_allclose(grads[alpha], np.exp(alpha.data) * [[0.7, 2.0, 0.1]])
    gradcheck(lambda: mtl_loss(losses, alpha), [alpha])


def test_mtl_loss_errors():
    """Non-finite task losses are reported by task name; shapes must agree."""
    loss = Tensor([[1.0]])
    loss.data = np.array([[np.inf]])
    with pytest.raises(NonFiniteError, match="'TW_A'"):
        mtl_loss([constant([[1.0]]), loss], constant([[0.0, 0.0]]), tasks=['EL', 'TW_A'])
    with pytest.raises(ShapeError):
        mtl_loss([constant([[1.0]])], constant([[0.0, 0.0]]))
    with pytest.raises(ValueError):
        mtl_loss([], constant(np.zeros((1, 0))))


def test_task_objective():
    """Ranking tasks add beta times the ranking loss to their MSE."""
    pred, labels = _column([2.0, 2.0]), [4.0, 1.0]
    cfg = LossConfig(ranking_coeff=0.1)
    mse = (4.0 + 1.0) / 2
    assert task_objective(pred, labels, 'EL', cfg).item() == pytest.approx(mse + 0.1)
    assert task_objective(pred, labels, 'TW_A', cfg).item() == pytest.approx(mse)
    assert task_objective(pred, labels, 'EL', LossConfig(ranking_coeff=0.0)).item() == pytest.approx(mse)


def test_model_objective(gradcheck):
    """Task objectives are summed without logits and exp-weighted with them; gradients check out."""
    rng = np.random.default_rng(0)
    pred = Tensor(rng.normal(size=(4, 3)), requires_grad=True)
    labels = rng.uniform(1.0, 5.0, size=(4, 3))
    tasks = ('EL', 'TW_A', 'LS_dominance')
    cfg = LossConfig()
    per_task = [
        task_objective(constant(pred.data[:, [j]]), labels[:, j], task, cfg).item() for j, task in enumerate(tasks)
    ]
    assert model_objective(pred, labels, tasks, cfg).item() == pytest.approx(sum(per_task))
    alpha = Tensor([[0.5, 0.0, -0.5]], requires_grad=True)
    weighted = model_objective(pred, labels, tasks, cfg, alpha=alpha).item()
    assert weighted == pytest.approx(float(np.dot(np.exp([0.5, 0.0, -0.5]), per_task)))
    gradcheck(lambda: model_objective(pred, labels, tasks, cfg, alpha=alpha), [pred, alpha])
    with pytest.raises(ShapeError):
        model_objective(pred, labels[:, :2], tasks, cfg)


def test_loss_config_validation():
    with pytest.raises(ValueError):
        LossConfig(ranking_coeff=-0.1)
    with pytest.raises(ValueError):
        LossConfig(ranking_margin=-1.0)
    assert LossConfig(ranking_tasks=['EL', 'LS_dominance']).ranking_tasks == ('EL', 'LS_dominance')
