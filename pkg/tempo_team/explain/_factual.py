# -*- coding: utf-8 -*-
"""
Gradient saliency over members, snapshots and features, and the
expected-teamwork score.
"""

import dataclasses
import functools
import math
import typing as ty

import numpy as np

from ..graph_extract import TW_TASKS, DynamicTeam
from ..model import TeamModel
from ..numerics import Tensor, backward, mean_all, take_cols, take_rows

__all__ = (
    'EXPECTED_TEAMWORK',
    'Target',
    'AttributionMap',
    'target_score',
    'saliency',
    'expected_teamwork',
    'teamwork_level',
)

EXPECTED_TEAMWORK = 'expected_teamwork'

# A task name (team mean of that task), or a (task, member) pair where a
# ``None`` member again means the team mean. ``expected_teamwork`` may stand in
# for the task.
Target = ty.Union[str, ty.Tuple[str, ty.Optional[int]]]


def _split_target(target: Target) -> ty.Tuple[str, ty.Optional[int]]:
    if isinstance(target, str):
        return target, None
    task, member = target
    return task, member


def _columns(model: TeamModel, task: str) -> ty.List[int]:
    if task == EXPECTED_TEAMWORK:
        missing = [name for name in TW_TASKS if name not in model.tasks]
        if missing:
            raise ValueError(f'Expected teamwork needs heads for {missing}, model has {list(model.tasks)}.')
        return [model.tasks.index(name) for name in TW_TASKS]
    if task not in model.tasks:
        raise ValueError(f"Task '{task}' has no head in the model (tasks {list(model.tasks)}).")
    return [model.tasks.index(task)]


def target_score(
    model: TeamModel,
    team: DynamicTeam,
    target: Target,
    inputs: ty.Optional[ty.Sequence[Tensor]] = None,
) -> Tensor:
    """The ``1 x 1`` scalar prediction the explainers attribute or optimise."""
    task, member = _split_target(target)
    columns = _columns(model, task)
    pred = take_cols(model.forward(team, inputs), columns)
    if member is not None:
        if member not in team.members:
            raise ValueError(f'Member {member} is not in team {team.team_id} (roster {list(team.members)}).')
        pred = take_rows(pred, [team.members.index(member)])
    return mean_all(pred)


@dataclasses.dataclass(frozen=True)
class AttributionMap:
    """
    ``values[i, t, k]`` is the derivative magnitude of the target prediction
    with respect to feature ``k`` of member ``members[i]`` in snapshot ``t``
    (the signed derivative when ``signed`` is set).
    """
    team_id: str
    members: ty.Tuple[int, ...]
    target_task: str
    target_member: ty.Optional[int]
    values: np.ndarray
    signed: bool = False

    def __post_init__(self):
        if self.values.ndim != 3 or self.values.shape[0] != len(self.members):
            raise ValueError(f'Attribution values of shape {self.values.shape} for {len(self.members)} members.')
        if not self.signed and np.any(self.values < 0):
            raise ValueError('Unsigned attribution values must be non-negative.')

    @functools.cached_property
    def per_member_timestep(self) -> np.ndarray:
        """Mean over features, ``n x K``."""
        return self.values.mean(axis=2)

    @functools.cached_property
    def per_member(self) -> np.ndarray:
        """Mean over snapshots and features, one score per member."""
        return self.values.mean(axis=(1, 2))

    def as_dict(self) -> dict:
        return {
            'team_id': self.team_id,
            'members': list(self.members),
            'target_task': self.target_task,
            'target_member': self.target_member,
            'signed': self.signed,
            'values': self.values.tolist(),
            'per_member_timestep': self.per_member_timestep.tolist(),
            'per_member': self.per_member.tolist(),
        }


def saliency(
    model: TeamModel,
    team: DynamicTeam,
    target_member: ty.Optional[int] = None,
    target_task: str = EXPECTED_TEAMWORK,
    signed: bool = False,
) -> AttributionMap:
    """
    Backpropagate one scalar prediction to every raw input feature.

    The target is ``target_task`` for ``target_member``, or its team mean when
    the member is ``None``. ``expected_teamwork`` averages the eight teamwork
    heads.
    """
    inputs = [Tensor(snapshot.feature_matrix, requires_grad=True) for snapshot in team.snapshots]
    score = target_score(model, team, (target_task, target_member), inputs)
    grads = backward(score)
    stacked = np.stack([grads.get(tensor, np.zeros(tensor.shape)) for tensor in inputs], axis=1)
    return AttributionMap(
        team_id=team.team_id,
        members=team.members,
        target_task=target_task,
        target_member=target_member,
        values=stacked if signed else np.abs(stacked),
        signed=signed,
    )


def expected_teamwork(model: TeamModel, team: DynamicTeam) -> float:
    """Mean of the eight teamwork predictions over all members."""
    return target_score(model, team, EXPECTED_TEAMWORK).item()


def teamwork_level(value: float, scale: ty.Tuple[float, float] = (1.0, 7.0), bins: int = 7) -> int:
    """Discretise a teamwork score into levels ``1..bins`` of equal width over ``scale``."""
    low, high = scale
    if not low < high or bins < 1:
        raise ValueError(f'Invalid scale {scale} or bin count {bins}.')
    fraction = (min(max(value, low), high) - low) / (high - low)
    return min(bins, 1 + int(math.floor(fraction * bins)))
