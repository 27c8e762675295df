# -*- coding: utf-8 -*-
"""
Efficiency comparison of model systems and the leader-separation score of
social embeddings.
"""

import csv
import dataclasses
import itertools
import math
import pathlib
import time
import typing as ty

import numpy as np

from ..decoders_losses import LossConfig
from ..graph_extract import EL_TASK, DynamicTeam
from ..model import TeamModel
from ..numerics import backward
from ._train import team_objective

__all__ = ('EfficiencyRow', 'EfficiencyReport', 'efficiency_audit', 'embedding_separation')

EFFICIENCY_COLUMNS = ('system', 'models', 'params', 'forward_passes', 'train_ms', 'infer_ms')


@dataclasses.dataclass(frozen=True)
class EfficiencyRow:
    """
    Cost of one system of models serving the same tasks: parameters, forward
    passes per team, gradient-epoch time and inference time per team (ms).
    """
    system: str
    models: int
    params: int
    forward_passes: int
    train_ms: float
    infer_ms: float


@dataclasses.dataclass
class EfficiencyReport:
    rows: ty.List[EfficiencyRow]

    def get(self, system: str) -> EfficiencyRow:
        for row in self.rows:
            if row.system == system:
                return row
        raise KeyError(f'No efficiency row for system {system}.')

    def reductions(self, system: str, baseline: str) -> ty.Dict[str, float]:
        """Relative savings ``1 - system / baseline`` of each cost."""
        ours, theirs = self.get(system), self.get(baseline)
        result = {}
        for field in ('params', 'forward_passes', 'train_ms', 'infer_ms'):
            reference = getattr(theirs, field)
            result[field] = 1.0 - getattr(ours, field) / reference if reference else 0.0
        return result

    def to_csv(self, path: ty.Union[str, pathlib.Path]) -> None:
        with open(path, 'w', encoding='utf8', newline='') as handle:
            writer = csv.writer(handle, lineterminator='\n')
            writer.writerow(EFFICIENCY_COLUMNS)
            for row in self.rows:
                writer.writerow([getattr(row, column) for column in EFFICIENCY_COLUMNS])


def efficiency_audit(
    systems: ty.Mapping[str, ty.Sequence[TeamModel]],
    teams: ty.Sequence[DynamicTeam],
    loss_cfg: LossConfig = LossConfig(),
    record_timing: bool = True,
) -> EfficiencyReport:
    """
    Compare systems of models on the same teams, for example one multi-task
    model against one single-task model per task.

    Training time is the wall clock of one forward and backward pass per team
    for every model of the system; inference time is one prediction per team
    for every model of the system.
    """
    if not teams:
        raise ValueError('efficiency_audit needs at least one team.')
    rows = []
    for name, models in systems.items():
        train_ms = infer_ms = 0.0
        if record_timing:
            started = time.perf_counter()
            for model, team in itertools.product(models, teams):
                backward(team_objective(model, team, loss_cfg, weighted=True))
            train_ms = (time.perf_counter() - started) * 1000.0
            started = time.perf_counter()
            for model, team in itertools.product(models, teams):
                model.predict(team)
            infer_ms = (time.perf_counter() - started) * 1000.0 / len(teams)
        rows.append(
            EfficiencyRow(
                system=name,
                models=len(models),
                params=sum(model.param_count() for model in models),
                forward_passes=len(models),
                train_ms=train_ms,
                infer_ms=infer_ms,
            )
        )
    return EfficiencyReport(rows=rows)


def embedding_separation(model: TeamModel, teams: ty.Sequence[DynamicTeam], leader_task: str = EL_TASK) -> float:
    """
    Mean distance from each team's top-``leader_task`` member to the other
    members, divided by the mean distance among those other members.

    Values above 1 mean leaders sit apart from non-leaders in embedding space.
    Teams with fewer than three members are skipped.
    """
    leader_distances, peer_distances = [], []
    for team in teams:
        if team.n_members < 3:
            continue
        labels = team.task_labels(leader_task)
        leader = int(np.argmax(labels))
        embedding = model.embed(team).numpy()
        others = [member for member in range(team.n_members) if member != leader]
        leader_distances.extend(np.linalg.norm(embedding[leader] - embedding[member]) for member in others)
        peer_distances.extend(
            np.linalg.norm(embedding[first] - embedding[second])
            for first, second in itertools.combinations(others, 2)
        )
    if not leader_distances:
        raise ValueError('embedding_separation needs a team with at least three members.')
    peer_mean = float(np.mean(peer_distances))
    if peer_mean == 0.0:
        return math.inf
    return float(np.mean(leader_distances)) / peer_mean
