# -*- coding: utf-8 -*-
"""
Reading and writing the JSON interchange format of team datasets.

A dataset file holds ``{"teams": [team, ...]}``; a file holding a single team
object or a bare list of team objects is accepted as well. Each team object is::

    {"team_id": str, "group_id": str (optional), "tasks": [str],
     "task_scales": {task: [min, max]},
     "snapshots": [{"t": int, "members": [int], "edges": [[int, int]], "features": [[float]]}],
     "labels": {"<member_id>": {task: float}}}

Every violation is reported as a :class:`DatasetValidationError` carrying the
JSON path of the offending value.
"""

import json
import math
import pathlib
import typing as ty

from voluptuous import All, Invalid, Length, MultipleInvalid, Optional, Required, Schema

from ._types import ALL_TASKS, DynamicTeam, StaticTeamSnapshot, TeamDataset

__all__ = ('DatasetValidationError', 'load_dataset', 'save_dataset', 'dataset_from_json', 'dataset_to_json')


class DatasetValidationError(ValueError):
    """A dataset document violates the interchange format."""

    def __init__(self, path: str, message: str):
        super().__init__(f'{path}: {message}')
        self.path = path
        self.message = message


def _real(value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise Invalid('expected a number')
    try:
        number = float(value)
    except OverflowError as exc:
        raise Invalid('expected a finite number') from exc
    if not math.isfinite(number):
        raise Invalid('expected a finite number')
    return number



def _integer(value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise Invalid('expected an integer')
    return value


SNAPSHOT_SCHEMA = Schema({
    Required('t'): _integer,
    Required('members'): All([_integer], Length(min=1)),
    Required('edges'): [All([_integer], Length(min=2, max=2))],
    Required('features'): [All([_real], Length(min=1))],
})

TEAM_SCHEMA = Schema({
    Required('team_id'): str,
    Optional('group_id'): str,
    Required('tasks'): All([str], Length(min=1)),
    Required('task_scales'): {
        str: All([_real], Length(min=2, max=2))
    },
    Required('snapshots'): All([SNAPSHOT_SCHEMA], Length(min=1)),
    Required('labels'): {
        str: {
            str: _real
        }
    },
})


def _json_path(parts: ty.Iterable[ty.Union[str, int]]) -> str:
    return '$' + ''.join(f'[{part}]' if isinstance(part, int) else f'.{part}' for part in parts)


def _team_from_json(document: ty.Any, prefix: ty.List[ty.Union[str, int]]) -> ty.Tuple[DynamicTeam, dict]:
    # pylint: disable=too-many-locals,too-many-branches
    try:
        document = TEAM_SCHEMA(document)
    except MultipleInvalid as exc:
        error = exc.errors[0]
        raise DatasetValidationError(_json_path(prefix + list(error.path)), error.error_message) from exc

    tasks = tuple(document['tasks'])
    for index, task in enumerate(tasks):
        if task not in ALL_TASKS:
            raise DatasetValidationError(_json_path(prefix + ['tasks', index]), f"unknown task '{task}'")
    if len(set(tasks)) != len(tasks):
        raise DatasetValidationError(_json_path(prefix + ['tasks']), 'task listed twice')
    scales = {}
    for task in tasks:
        if task not in document['task_scales']:
            raise DatasetValidationError(_json_path(prefix + ['task_scales']), f"no scale for task '{task}'")
        low, high = document['task_scales'][task]
        if not low < high:
            raise DatasetValidationError(_json_path(prefix + ['task_scales', task]), 'min must be below max')
        scales[task] = (low, high)

    snapshots = []
    roster = None
    feature_dim = None
    for index, snap in enumerate(document['snapshots']):
        path = prefix + ['snapshots', index]
        members = tuple(snap['members'])
        if len(set(members)) != len(members):
            raise DatasetValidationError(_json_path(path + ['members']), 'member listed twice')
        if roster is None:
            roster = members
        elif members != roster:
            raise DatasetValidationError(_json_path(path + ['members']), f'roster of snapshot {index} differs from '
                                         'snapshot 0')
        for edge_index, (src, dst) in enumerate(snap['edges']):
            if src not in members or dst not in members:
                raise DatasetValidationError(
                    _json_path(path + ['edges', edge_index]),
                    f'edge ({src}, {dst}) in snapshot {index} references a member absent from the roster'
                )
            if src == dst:
                raise DatasetValidationError(_json_path(path + ['edges', edge_index]),
                                             f'self-loop on member {src} in snapshot {index}')
        features = snap['features']
        if len(features) != len(members):
            raise DatasetValidationError(_json_path(path + ['features']),
                                         f'{len(features)} feature rows for {len(members)} members')
        for row_index, row in enumerate(features):
            if feature_dim is None:
                feature_dim = len(row)
            elif len(row) != feature_dim:
                raise DatasetValidationError(_json_path(path + ['features', row_index]),
                                             f'ragged feature row of length {len(row)}, expected {feature_dim}')
        try:
            snapshots.append(
                StaticTeamSnapshot(
                    timestep=snap['t'],
                    members=members,
                    edges=tuple((src, dst) for src, dst in snap['edges']),
                    features=tuple(tuple(row) for row in features),
                )
            )
        except ValueError as exc:
            raise DatasetValidationError(_json_path(path), str(exc)) from exc

    labels = document['labels']
    rows = []
    for member in roster or ():
        key = str(member)
        if key not in labels:
            raise DatasetValidationError(_json_path(prefix + ['labels']), f'no labels for member {member}')
        row = []
        for task in tasks:
            if task not in labels[key]:
                raise DatasetValidationError(_json_path(prefix + ['labels', key]), f"missing task '{task}'")
            value = labels[key][task]
            low, high = scales[task]
            if not low <= value <= high:
                raise DatasetValidationError(_json_path(prefix + ['labels', key, task]),
                                             f'label {value} outside the scale [{low}, {high}]')
            row.append(value)
        rows.append(tuple(row))
    for key in labels:
        if key not in {str(member) for member in roster or ()}:
            raise DatasetValidationError(_json_path(prefix + ['labels', key]), 'labels for a member not in the roster')
        for task in labels[key]:
            if task not in tasks:
                raise DatasetValidationError(_json_path(prefix + ['labels', key, task]), f"unknown task '{task}'")

    try:
        team = DynamicTeam(
            team_id=document['team_id'],
            snapshots=tuple(snapshots),
            labels=tuple(rows),
            label_tasks=tasks,
            group_id=document.get('group_id'),
        )
    except ValueError as exc:
        raise DatasetValidationError(_json_path(prefix), str(exc)) from exc
    return team, scales


def dataset_from_json(document: ty.Any) -> TeamDataset:
    """Validate a parsed JSON document and build the dataset it describes."""
    prefix: ty.List[ty.Union[str, int]]
    if isinstance(document, dict) and 'teams' in document:
        extra = sorted(set(document) - {'teams'})
        if extra:
            raise DatasetValidationError(_json_path([extra[0]]), 'extra keys not allowed')
        teams_doc, prefix = document['teams'], ['teams']
    elif isinstance(document, dict):
        teams_doc, prefix = [document], []
    else:
        teams_doc, prefix = document, []
    if not isinstance(teams_doc, list) or not teams_doc:
        raise DatasetValidationError(_json_path(prefix), 'expected a non-empty list of teams')
    single = isinstance(document, dict) and 'teams' not in document

    teams = []
    scales: ty.Dict[str, ty.Tuple[float, float]] = {}
    for index, team_doc in enumerate(teams_doc):
        team_prefix = [] if single else prefix + [index]
        team, team_scales = _team_from_json(team_doc, team_prefix)
        for task, scale in team_scales.items():
            if scales.setdefault(task, scale) != scale:
                raise DatasetValidationError(_json_path(team_prefix + ['task_scales', task]),
                                             'scale disagrees with an earlier team')
        teams.append(team)
    try:
        return TeamDataset(teams=tuple(teams), task_scales=scales)
    except ValueError as exc:
        raise DatasetValidationError(_json_path(prefix), str(exc)) from exc


def dataset_to_json(ds: TeamDataset) -> dict:
    teams = []
    for team in ds.teams:
        document = {
            'team_id': team.team_id,
            'tasks': list(team.label_tasks),
            'task_scales': {task: list(ds.task_scales[task]) for task in team.label_tasks},
            'snapshots': [{
                't': snapshot.timestep,
                'members': list(snapshot.members),
                'edges': [list(edge) for edge in snapshot.edges],
                'features': [list(row) for row in snapshot.features],
            } for snapshot in team.snapshots],
            'labels': {
                str(member): dict(zip(team.label_tasks, row)) for member, row in zip(team.members, team.labels)
            },
        }
        if team.group_id is not None:
            document['group_id'] = team.group_id
        teams.append(document)
    return {'teams': teams}


def load_dataset(path: ty.Union[str, pathlib.Path]) -> TeamDataset:
    """Read and validate a dataset file."""
    try:
        with open(path, encoding='utf8') as handle:
            document = json.load(handle)
    except json.JSONDecodeError as exc:
        raise DatasetValidationError('$', f'invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}') from exc
    except UnicodeDecodeError as exc:
        raise DatasetValidationError('$', f'file is not UTF-8: {exc}') from exc
    return dataset_from_json(document)


def save_dataset(ds: TeamDataset, path: ty.Union[str, pathlib.Path]) -> None:
    """Write a dataset file; floats are written with their exact decimal representation."""
    with open(path, 'w', encoding='utf8') as handle:
        json.dump(dataset_to_json(ds), handle, allow_nan=False)
