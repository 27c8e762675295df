# -*- coding: utf-8 -*-
"""
Regression, pairwise ranking and weighted multi-task losses.
"""

import dataclasses
import typing as ty
import warnings

import numpy as np

from ..numerics import (
    NonFiniteError, ShapeError, Tensor, add, constant, exp, matmul, mean_all, mul, relu, scale, sub, take_cols, total
)

__all__ = (
    'DegenerateRankingWarning',
    'LossConfig',
    'mse_loss',
    'pairwise_ranking_loss',
    'mtl_loss',
    'task_objective',
    'model_objective',
)


class DegenerateRankingWarning(UserWarning):
    """Emitted when a ranking loss is requested for fewer than two members."""


@dataclasses.dataclass(frozen=True)
class LossConfig:
    """
    ranking_margin :
        Hinge margin of the pairwise ranking loss.
    ranking_coeff :
        Weight of the ranking term added to the MSE of each ranking task.
    ranking_tasks :
        Tasks that receive the ranking term.
    """
    ranking_margin: float = 1.0
    ranking_coeff: float = 0.1
    ranking_tasks: ty.Tuple[str, ...] = ('EL', )

    def __post_init__(self):
        object.__setattr__(self, 'ranking_tasks', tuple(self.ranking_tasks))
        if self.ranking_coeff < 0:
            raise ValueError(f'Ranking coefficient must be non-negative, got {self.ranking_coeff}.')
        if self.ranking_margin < 0:
            raise ValueError(f'Ranking margin must be non-negative, got {self.ranking_margin}.')


def _column(labels, rows: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.float64).reshape(-1, 1)
    if labels.shape[0] != rows:
        raise ShapeError(f'{labels.shape[0]} labels for {rows} predictions')
    return labels


def mse_loss(pred: Tensor, labels) -> Tensor:
    """Mean squared error between an ``n x 1`` prediction column and ``n`` labels."""
    diff = sub(pred, constant(_column(labels, pred.shape[0])))
    return mean_all(mul(diff, diff))


def pairwise_ranking_loss(scores: Tensor, labels, margin: float = 1.0) -> Tensor:
    """
    ``sum max(0, margin - (s_i - s_j))`` over member pairs with ``label_i > label_j``.

    Tied labels form no pair. Fewer than two members give a zero loss and a
    :class:`DegenerateRankingWarning`.
    """
    labels = _column(labels, scores.shape[0]).reshape(-1)
    if labels.size < 2:
        warnings.warn(f'Ranking loss over {labels.size} member(s) is zero.', DegenerateRankingWarning)
        return constant([[0.0]])
    pairs = [(i, j) for i in range(labels.size) for j in range(labels.size) if labels[i] > labels[j]]
    if not pairs:
        return constant([[0.0]])
    selector = np.zeros((len(pairs), labels.size))
    for row, (i, j) in enumerate(pairs):
        selector[row, i] = 1.0
        selector[row, j] = -1.0
    gaps = matmul(constant(selector), scores)
    return total(relu(add(scale(gaps, -1.0), constant(np.full((len(pairs), 1), margin)))))


def mtl_loss(losses: ty.Sequence[Tensor], alpha: Tensor, tasks: ty.Optional[ty.Sequence[str]] = None) -> Tensor:
    """``sum exp(alpha_i) * L_i``; ``alpha`` is a ``1 x m`` tensor of logits."""
    tasks = list(tasks) if tasks is not None else [str(index) for index in range(len(losses))]
    if not losses:
        raise ValueError('mtl_loss needs at least one task loss.')
    if alpha.shape != (1, len(losses)) or len(tasks) != len(losses):
        raise ShapeError(f'mtl_loss: {len(losses)} task losses for logits of shape {alpha.shape}')
    weights = exp(alpha)
    combined: ty.Optional[Tensor] = None
    for index, (loss, task) in enumerate(zip(losses, tasks)):
        if not np.all(np.isfinite(loss.data)):
            raise NonFiniteError(f"Loss of task '{task}' is not finite.")
        try:
            term = mul(loss, take_cols(weights, [index]))
            combined = term if combined is None else add(combined, term)
        except NonFiniteError as exc:
            raise NonFiniteError(f"Weighted loss of task '{task}' is not finite.") from exc
    assert combined is not None
    return combined


def task_objective(pred: Tensor, labels, task: str, cfg: LossConfig) -> Tensor:
    """``MSE_t + beta * L_p,t`` for ranking tasks, plain ``MSE_t`` otherwise."""
    loss = mse_loss(pred, labels)
    if task in cfg.ranking_tasks and cfg.ranking_coeff > 0:
        loss = add(loss, scale(pairwise_ranking_loss(pred, labels, cfg.ranking_margin), cfg.ranking_coeff))
    return loss


def model_objective(
    pred: Tensor,
    labels,
    tasks: ty.Sequence[str],
    cfg: LossConfig,
    alpha: ty.Optional[Tensor] = None,
) -> Tensor:
    """
    The training objective over an ``n x m`` prediction matrix. With ``alpha``
    the task objectives are combined by :func:`mtl_loss`, otherwise summed.
    """
    labels = np.asarray(labels, dtype=np.float64).reshape(pred.shape[0], -1)
    if labels.shape != pred.shape or len(tasks) != pred.shape[1]:
        raise ShapeError(f'model_objective: predictions {pred.shape}, labels {labels.shape}, {len(tasks)} tasks')
    losses = [
        task_objective(take_cols(pred, [column]), labels[:, column], task, cfg) for column, task in enumerate(tasks)
    ]
    if alpha is not None:
        return mtl_loss(losses, alpha, tasks)
    combined = losses[0]
    for loss in losses[1:]:
        combined = add(combined, loss)
    return combined
