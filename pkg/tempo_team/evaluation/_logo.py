# -*- coding: utf-8 -*-
"""
The nested leave-one-group-out protocol over several seeds.
"""

import concurrent.futures
import dataclasses
import logging
import time
import typing as ty

import numpy as np

from ..decoders_losses import LossConfig
from ..graph_extract import TASK_GROUPS, TeamDataset
from ..model import ModelConfig
from ._folds import Fold, fold_plan
from ._metrics import acc_at_1, acc_at_last, mse
from ._report import METRICS, MetricReport, MetricRow
from ._train import TrainConfig, fit_normalisation, train_model

__all__ = ('logo_run', )

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class _FoldJob:  # pylint: disable=too-many-instance-attributes
    dataset: TeamDataset
    model_cfg: ModelConfig
    train_cfg: TrainConfig
    loss_cfg: LossConfig
    tasks: ty.Tuple[str, ...]
    seed: int
    fold_index: int
    fold: Fold


@dataclasses.dataclass
class _FoldOutcome:
    metrics: ty.Dict[ty.Tuple[str, str], float]
    params: ty.Dict[str, int]
    train_ms: ty.Dict[str, float]
    infer_ms: ty.Dict[str, float]


def _run_fold(job: _FoldJob) -> _FoldOutcome:  # pylint: disable=too-many-locals
    dataset, fold = job.dataset, job.fold
    train_teams = dataset.teams_in(fold.train_groups)
    val_teams = dataset.teams_in([fold.val_group])
    test_teams = dataset.teams_in([fold.test_group])
    outcome = _FoldOutcome(metrics={}, params={}, train_ms={}, infer_ms={})
    seed = [job.seed, job.fold_index]
    for model in job.model_cfg.build(dataset.feature_dim, job.tasks, seed=seed):
        fit_normalisation(model, train_teams, job.train_cfg.standardize_targets)
        result = train_model(model, train_teams, val_teams, job.train_cfg, job.loss_cfg, seed=seed)
        started = time.perf_counter()
        predictions = [model.predict(team) for team in test_teams]
        infer_ms = (time.perf_counter() - started) * 1000.0 / len(test_teams)
        for column, task in enumerate(model.tasks):
            per_team = [(
                mse(pred[:, column], team.task_labels(task)),
                acc_at_1(pred[:, column], team.task_labels(task)),
                acc_at_last(pred[:, column], team.task_labels(task)),
            ) for pred, team in zip(predictions, test_teams)]
            for metric, values in zip(METRICS, zip(*per_team)):
                outcome.metrics[(task, metric)] = float(np.mean(values))
            outcome.params[task] = model.param_count()
            outcome.train_ms[task] = result.train_ms_per_epoch
            outcome.infer_ms[task] = infer_ms
    logger.info(
        'Seed %d fold %d (val %s, test %s) done.', job.seed, job.fold_index, fold.val_group, fold.test_group
    )
    return outcome


def logo_run(  # pylint: disable=too-many-arguments,too-many-locals
    ds: TeamDataset,
    model_cfg: ModelConfig,
    train_cfg: TrainConfig,
    seeds: ty.Sequence[int],
    loss_cfg: LossConfig = LossConfig(),
    jobs: int = 1,
    record_timing: bool = True,
) -> MetricReport:
    """
    Run every (validation, test) fold of the dataset's groups for every seed.

    Metrics are averaged over the members of each test team, then over the
    test teams of the held-out group, then over folds. Each row reports the
    mean and standard deviation of those per-seed averages. Besides one row per
    task there are ``mse`` rows for the ``TW`` and ``LS`` task groups.

    ``jobs > 1`` runs folds in a process pool; results do not depend on it.
    With ``record_timing`` off, timing columns are zero and the report is
    byte-for-byte reproducible.
    """
    if not seeds:
        raise ValueError('logo_run needs at least one seed.')
    tasks = tuple(train_cfg.tasks) if train_cfg.tasks else ds.tasks
    unknown = [task for task in tasks if task not in ds.tasks]
    if unknown:
        raise ValueError(f'Tasks {unknown} are not labeled in the dataset.')
    plan = fold_plan(ds.groups)
    work = [
        _FoldJob(ds, model_cfg, train_cfg, loss_cfg, tasks, seed, index, fold)
        for seed in seeds for index, fold in enumerate(plan)
    ]
    logger.info('Running %d folds x %d seeds for %s.', len(plan), len(seeds), model_cfg.paradigm)
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_fold, work))
    else:
        outcomes = [_run_fold(job) for job in work]

    per_seed: ty.Dict[ty.Tuple[str, str], ty.List[float]] = {}
    for position in range(len(seeds)):
        chunk = outcomes[position * len(plan):(position + 1) * len(plan)]
        for key in chunk[0].metrics:
            per_seed.setdefault(key, []).append(float(np.mean([outcome.metrics[key] for outcome in chunk])))

    def _timing(values: ty.Iterable[float]) -> float:
        return float(np.mean(list(values))) if record_timing else 0.0

    params = outcomes[0].params
    train_ms = {task: _timing(outcome.train_ms[task] for outcome in outcomes) for task in tasks}
    infer_ms = {task: _timing(outcome.infer_ms[task] for outcome in outcomes) for task in tasks}

    rows = []
    for task in tasks:
        for metric in METRICS:
            values = per_seed[(task, metric)]
            rows.append(
                MetricRow(
                    model=model_cfg.paradigm,
                    task=task,
                    metric=metric,
                    mean=float(np.mean(values)),
                    std=float(np.std(values)),
                    params=params[task],
                    train_ms=train_ms[task],
                    infer_ms=infer_ms[task],
                )
            )
    for group, group_tasks in TASK_GROUPS.items():
        members = [task for task in group_tasks if task in tasks]
        if not members:
            continue
        values = list(np.mean([per_seed[(task, 'mse')] for task in members], axis=0))
        served = members[:1] if model_cfg.multi_task else members
        rows.append(
            MetricRow(
                model=model_cfg.paradigm,
                task=group,
                metric='mse',
                mean=float(np.mean(values)),
                std=float(np.std(values)),
                params=sum(params[task] for task in served),
                train_ms=sum(train_ms[task] for task in served),
                infer_ms=sum(infer_ms[task] for task in served),
            )
        )
    return MetricReport(rows=rows, seeds=tuple(seeds), n_folds=len(plan))
