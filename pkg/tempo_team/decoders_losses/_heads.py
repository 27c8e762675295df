# -*- coding: utf-8 -*-
"""
Per-task prediction heads and the task-weight logits of multi-task models.
"""

import dataclasses
import typing as ty

import numpy as np

from ..numerics import ParamStore, ShapeError, Tensor, add, concat_cols, exp, glorot_uniform, matmul, relu

__all__ = ('HeadSpec', 'init_head_params', 'decode', 'task_weights', 'ALPHA_PARAM')

ALPHA_PARAM = 'mtl.alpha'


@dataclasses.dataclass(frozen=True)
class HeadSpec:
    """
    tasks :
        Ordered task names, one head each. One task makes a single-task model,
        two or more a multi-task model with task-weight logits.
    d_in :
        Width of the social embedding the heads read.
    hidden :
        Width of each head's hidden layer.
    """
    tasks: ty.Tuple[str, ...]
    d_in: int
    hidden: int = 16

    def __post_init__(self):
        object.__setattr__(self, 'tasks', tuple(self.tasks))
        if not self.tasks:
            raise ValueError('A head specification needs at least one task.')
        if len(set(self.tasks)) != len(self.tasks):
            raise ValueError(f'Tasks {list(self.tasks)} contain duplicates.')
        if self.d_in < 1 or self.hidden < 1:
            raise ValueError('Head widths must be at least 1.')

    @property
    def multi_task(self) -> bool:
        return len(self.tasks) >= 2

    def to_dict(self) -> dict:
        return {'tasks': list(self.tasks), 'd_in': self.d_in, 'hidden': self.hidden}


def init_head_params(spec: HeadSpec, rng: np.random.Generator, store: ParamStore) -> None:
    for task in spec.tasks:
        store.add(f'head.{task}.W1', glorot_uniform(rng, spec.d_in, spec.hidden))
        store.add(f'head.{task}.b1', np.zeros((1, spec.hidden)))
        store.add(f'head.{task}.W2', glorot_uniform(rng, spec.hidden, 1))
        store.add(f'head.{task}.b2', np.zeros((1, 1)))
    if spec.multi_task:
        store.add(ALPHA_PARAM, np.zeros((1, len(spec.tasks))))


def decode(emb: Tensor, spec: HeadSpec, params: ty.Mapping[str, Tensor]) -> Tensor:
    """Apply every head to every member row, giving an ``n x m`` prediction matrix."""
    if emb.shape[1] != spec.d_in:
        raise ShapeError(f'decode: embedding of shape {emb.shape} for heads reading width {spec.d_in}')
    missing = [task for task in spec.tasks if f'head.{task}.W1' not in params]
    if missing:
        raise ValueError(f'No prediction head for tasks {missing}.')
    columns = []
    for task in spec.tasks:
        hidden = relu(add(matmul(emb, params[f'head.{task}.W1']), params[f'head.{task}.b1']))
        columns.append(add(matmul(hidden, params[f'head.{task}.W2']), params[f'head.{task}.b2']))
    return concat_cols(columns)


def task_weights(params: ty.Mapping[str, Tensor]) -> np.ndarray:
    """The loss weights ``exp(alpha)``, or an empty array for single-task models."""
    if ALPHA_PARAM not in params:
        return np.zeros(0)
    return exp(params[ALPHA_PARAM]).numpy().reshape(-1)
