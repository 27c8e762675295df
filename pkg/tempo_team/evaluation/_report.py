# -*- coding: utf-8 -*-
"""
Metric reports and their CSV and JSON forms.
"""

import csv
import dataclasses
import json
import pathlib
import typing as ty

__all__ = ('CSV_COLUMNS', 'METRICS', 'MetricRow', 'MetricReport')

CSV_COLUMNS = ('model', 'task', 'metric', 'mean', 'std', 'params', 'train_ms', 'infer_ms')
METRICS = ('mse', 'acc@1', 'acc@last')


@dataclasses.dataclass(frozen=True)
class MetricRow:  # pylint: disable=too-many-instance-attributes
    """
    One model x task x metric cell: the mean and standard deviation over seeds,
    the parameter count of the model(s) serving the task, the training time per
    epoch and the inference time per team (milliseconds).
    """
    model: str
    task: str
    metric: str
    mean: float
    std: float
    params: int
    train_ms: float
    infer_ms: float

    def __post_init__(self):
        if self.metric == 'mse' and self.mean < 0:
            raise ValueError(f'Negative MSE for {self.model}/{self.task}.')
        if self.metric != 'mse' and not 0.0 <= self.mean <= 1.0:
            raise ValueError(f'{self.metric} of {self.model}/{self.task} outside [0, 1]: {self.mean}.')


@dataclasses.dataclass
class MetricReport:
    rows: ty.List[MetricRow]
    seeds: ty.Tuple[int, ...] = ()
    n_folds: int = 0

    def get(self, model: str, task: str, metric: str) -> MetricRow:
        for row in self.rows:
            if (row.model, row.task, row.metric) == (model, task, metric):
                return row
        raise KeyError(f'No {metric} row for model {model} and task {task}.')

    @property
    def models(self) -> ty.Tuple[str, ...]:
        return tuple(dict.fromkeys(row.model for row in self.rows))

    def merged(self, other: 'MetricReport') -> 'MetricReport':
        return MetricReport(
            rows=self.rows + other.rows, seeds=self.seeds or other.seeds, n_folds=self.n_folds or other.n_folds
        )

    def as_dict(self) -> dict:
        return {
            'seeds': list(self.seeds),
            'n_folds': self.n_folds,
            'rows': [dataclasses.asdict(row) for row in self.rows],
        }

    @classmethod
    def from_dict(cls, content: ty.Mapping) -> 'MetricReport':
        return cls(
            rows=[MetricRow(**row) for row in content['rows']],
            seeds=tuple(content.get('seeds', ())),
            n_folds=content.get('n_folds', 0),
        )

    def to_csv(self, path: ty.Union[str, pathlib.Path]) -> None:
        with open(path, 'w', encoding='utf8', newline='') as handle:
            writer = csv.writer(handle, lineterminator='\n')
            writer.writerow(CSV_COLUMNS)
            for row in self.rows:
                writer.writerow([getattr(row, column) for column in CSV_COLUMNS])

    def to_json(self, path: ty.Union[str, pathlib.Path]) -> None:
        with open(path, 'w', encoding='utf8') as handle:
            json.dump(self.as_dict(), handle, indent=2)
            handle.write('\n')
