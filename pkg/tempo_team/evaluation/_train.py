# -*- coding: utf-8 -*-
"""
Per-team Adam training with early stopping on the validation teams.
"""

import dataclasses
import logging
import math
import time
import typing as ty

import numpy as np

from ..decoders_losses import LossConfig, model_objective
from ..graph_extract import DynamicTeam
from ..model import TeamModel
from ..numerics import AdamState, Tensor, adam_step, backward

__all__ = ('TrainConfig', 'TrainResult', 'fit_normalisation', 'team_targets', 'team_objective', 'train_model')

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class TrainConfig:  # pylint: disable=too-many-instance-attributes
    """The ``train`` section of a run configuration."""
    tasks: ty.Optional[ty.Tuple[str, ...]] = None
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    max_epochs: int = 300
    patience: int = 20
    standardize_targets: bool = True

    def __post_init__(self):
        if self.tasks is not None:
            object.__setattr__(self, 'tasks', tuple(self.tasks))
        if self.lr <= 0:
            raise ValueError(f'Learning rate must be positive, got {self.lr}.')
        if self.max_epochs < 1 or self.patience < 0:
            raise ValueError('max_epochs must be at least 1 and patience non-negative.')

    @classmethod
    def from_mapping(cls, mapping: ty.Mapping[str, ty.Any]) -> 'TrainConfig':
        return cls(**mapping)


@dataclasses.dataclass
class TrainResult:
    epochs: int
    best_epoch: int
    best_val_loss: float
    train_ms_per_epoch: float
    val_history: ty.List[float] = dataclasses.field(default_factory=list)


def team_targets(model: TeamModel, team: DynamicTeam) -> np.ndarray:
    """The team's labels for the model's tasks, ``n x m``, in label units."""
    return np.stack([team.task_labels(task) for task in model.tasks], axis=1)


def fit_normalisation(model: TeamModel, teams: ty.Sequence[DynamicTeam], standardize_targets: bool = True) -> None:
    """Fit feature z-scoring (and target standardisation) on the training teams."""
    rows = np.concatenate([team.feature_tensor().reshape(-1, team.feature_dim) for team in teams])
    feature_scale = rows.std(axis=0)
    feature_scale = np.where(feature_scale > 1e-12, feature_scale, 1.0)
    if standardize_targets:
        targets = np.concatenate([team_targets(model, team) for team in teams])
        target_scale = targets.std(axis=0)
        model.set_normalisation(
            rows.mean(axis=0), feature_scale, targets.mean(axis=0), np.where(target_scale > 1e-12, target_scale, 1.0)
        )
    else:
        model.set_normalisation(rows.mean(axis=0), feature_scale)


def team_objective(model: TeamModel, team: DynamicTeam, loss_cfg: LossConfig, weighted: bool) -> Tensor:
    labels = model.standardise_targets(team_targets(model, team))
    return model_objective(
        model.forward_standardised(team), labels, model.tasks, loss_cfg, alpha=model.alpha if weighted else None
    )


def _mean_loss(model: TeamModel, teams: ty.Sequence[DynamicTeam], loss_cfg: LossConfig) -> float:
    return float(np.mean([team_objective(model, team, loss_cfg, weighted=False).item() for team in teams]))


def train_model(
    model: TeamModel,
    train_teams: ty.Sequence[DynamicTeam],
    val_teams: ty.Sequence[DynamicTeam],
    train_cfg: TrainConfig = TrainConfig(),
    loss_cfg: LossConfig = LossConfig(),
    seed: ty.Union[int, ty.Sequence[int]] = 0,
) -> TrainResult:  # pylint: disable=too-many-arguments,too-many-locals
    """
    Train ``model`` in place with one Adam step per training team, visiting the
    teams in a seeded random order each epoch.

    Training stops after ``patience`` epochs without a lower validation loss
    (the unweighted sum of task objectives) or after ``max_epochs``; the
    parameters of the best epoch are restored. Without validation teams the
    training loss is monitored instead.
    """
    if not train_teams:
        raise ValueError('Cannot train without training teams.')
    rng = np.random.default_rng(seed)
    monitored = val_teams if val_teams else train_teams
    state = AdamState.for_params(model.params)
    best_loss, best_epoch, best_params = math.inf, 0, model.params.arrays()
    history: ty.List[float] = []
    stale = 0
    started = time.perf_counter()
    epoch = 0
    for epoch in range(1, train_cfg.max_epochs + 1):
        for index in rng.permutation(len(train_teams)):
            loss = team_objective(model, train_teams[index], loss_cfg, weighted=True)
            state = adam_step(
                model.params, backward(loss), state, train_cfg.lr, train_cfg.beta1, train_cfg.beta2, train_cfg.eps
            )
        val_loss = _mean_loss(model, monitored, loss_cfg)
        history.append(val_loss)
        logger.debug('Epoch %d: validation loss %.6f', epoch, val_loss)
        if val_loss < best_loss:
            best_loss, best_epoch, best_params = val_loss, epoch, model.params.arrays()
            stale = 0
        else:
            stale += 1
            if stale >= train_cfg.patience:
                logger.info('Early stopping after epoch %d, best epoch %d.', epoch, best_epoch)
                break
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    model.params.assign(best_params)
    return TrainResult(
        epochs=epoch,
        best_epoch=best_epoch,
        best_val_loss=best_loss,
        train_ms_per_epoch=elapsed_ms / max(epoch, 1),
        val_history=history,
    )
