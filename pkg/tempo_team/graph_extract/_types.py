# -*- coding: utf-8 -*-
"""
Domain types of the temporal graph extractor: interaction events, snapshots,
dynamic teams and datasets, plus the catalogue of team construct tasks.
"""

import dataclasses
import functools
import math
import typing as ty

import numpy as np

__all__ = (
    'EL_TASK',
    'LS_TASKS',
    'TW_TASKS',
    'ALL_TASKS',
    'TASK_SCALES',
    'TASK_GROUPS',
    'InteractionEvent',
    'SegmentationConfig',
    'EdgeRef',
    'StaticTeamSnapshot',
    'DynamicTeam',
    'TeamDataset',
)

EL_TASK = 'EL'
LS_TASKS = ('LS_dominance', 'LS_friendliness', 'LS_task_orientation')
TW_TASKS = ('TW_A', 'TW_BB', 'TW_MPM', 'TW_TL', 'TW_TO', 'TW_CC', 'TW_MT', 'TW_SMM')
ALL_TASKS = (EL_TASK, ) + LS_TASKS + TW_TASKS

# GLIS items are rated 1-5, SYMLOG dimensions 1-5 and BFT components 1-7.
TASK_SCALES: ty.Dict[str, ty.Tuple[float, float]] = {
    EL_TASK: (1.0, 5.0),
    **{task: (1.0, 5.0) for task in LS_TASKS},
    **{task: (1.0, 7.0) for task in TW_TASKS},
}

TASK_GROUPS: ty.Dict[str, ty.Tuple[str, ...]] = {'TW': TW_TASKS, 'LS': LS_TASKS}

# Absorbs float noise in ratios such as 1.1 / 0.1.
_RATIO_TOLERANCE = 1e-9


def ceil_ratio(numerator: float, denominator: float) -> int:
    """``ceil(numerator / denominator)`` for positive operands, at least 1."""
    return max(1, math.ceil(numerator / denominator - _RATIO_TOLERANCE))


@dataclasses.dataclass(frozen=True)
class InteractionEvent:
    """
    One activity interval of a member, with the features measured over it.

    ``addressees`` names the members spoken to when the recording says so;
    ``None`` means the whole team is addressed.
    """
    member_id: int
    t_start: float
    t_end: float
    feature_payload: ty.Tuple[float, ...]
    addressees: ty.Optional[ty.Tuple[int, ...]] = None

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError(f'Event of member {self.member_id} has t_start={self.t_start} >= t_end={self.t_end}.')
        if not all(math.isfinite(value) for value in self.feature_payload):
            raise ValueError(f'Event of member {self.member_id} at t={self.t_start} has a non-finite payload.')
        if self.addressees is not None and self.member_id in self.addressees:
            raise ValueError(f'Event of member {self.member_id} at t={self.t_start} addresses its own speaker.')


@dataclasses.dataclass(frozen=True)
class SegmentationConfig:
    """
    annotation_freq_f :
        Seconds covered by one labeled segment.
    subsegment_len_s :
        Seconds covered by one snapshot.
    feature_dim_d :
        Length of every feature payload.
    """
    annotation_freq_f: float
    subsegment_len_s: float
    feature_dim_d: int

    def __post_init__(self):
        if self.annotation_freq_f <= 0 or self.subsegment_len_s <= 0:
            raise ValueError('Segment and subsegment lengths must be positive.')
        if self.subsegment_len_s > self.annotation_freq_f:
            raise ValueError(
                f'Subsegment length {self.subsegment_len_s}s exceeds segment length {self.annotation_freq_f}s.'
            )
        if self.feature_dim_d < 1:
            raise ValueError('Feature dimension must be at least 1.')

    @property
    def snapshots_per_segment(self) -> int:
        return ceil_ratio(self.annotation_freq_f, self.subsegment_len_s)


@dataclasses.dataclass(frozen=True, order=True)
class EdgeRef:
    """A directed edge ``src -> dst`` in the snapshot at index ``t``."""
    t: int
    src: int
    dst: int


@dataclasses.dataclass(frozen=True)
class StaticTeamSnapshot:
    """
    One time-indexed team graph: roster, directed interaction edges and one
    feature row per member. Self-loops are never stored.
    """
    timestep: int
    members: ty.Tuple[int, ...]
    edges: ty.Tuple[ty.Tuple[int, int], ...]
    features: ty.Tuple[ty.Tuple[float, ...], ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError(f'Snapshot {self.timestep} has an empty roster.')
        roster = set(self.members)
        if len(roster) != len(self.members):
            raise ValueError(f'Snapshot {self.timestep} lists a member twice.')
        for src, dst in self.edges:
            if src == dst:
                raise ValueError(f'Snapshot {self.timestep} stores a self-loop on member {src}.')
            if src not in roster or dst not in roster:
                raise ValueError(f'Snapshot {self.timestep}: edge ({src}, {dst}) references a member not in roster.')
        if len(self.features) != len(self.members):
            raise ValueError(f'Snapshot {self.timestep} has {len(self.features)} feature rows for '
                             f'{len(self.members)} members.')
        if len({len(row) for row in self.features}) > 1:
            raise ValueError(f'Snapshot {self.timestep} has ragged feature rows.')
        if not all(math.isfinite(value) for row in self.features for value in row):
            raise ValueError(f'Snapshot {self.timestep} has non-finite features.')

    @functools.cached_property
    def feature_matrix(self) -> np.ndarray:
        matrix = np.array(self.features, dtype=np.float64).reshape(len(self.members), -1)
        matrix.setflags(write=False)
        return matrix

    @functools.cached_property
    def index_of(self) -> ty.Dict[int, int]:
        return {member: index for index, member in enumerate(self.members)}

    @property
    def feature_dim(self) -> int:
        return self.feature_matrix.shape[1]

    def edge_index_pairs(self) -> ty.List[ty.Tuple[int, int]]:
        """Edges as ``(src_row, dst_row)`` positions in the roster."""
        return [(self.index_of[src], self.index_of[dst]) for src, dst in self.edges]


@dataclasses.dataclass(frozen=True)
class DynamicTeam:
    """
    An ordered sequence of snapshots over a fixed roster, with one label row per
    member and one label column per task in ``label_tasks``.
    """
    team_id: str
    snapshots: ty.Tuple[StaticTeamSnapshot, ...]
    labels: ty.Tuple[ty.Tuple[float, ...], ...]
    label_tasks: ty.Tuple[str, ...]
    group_id: ty.Optional[str] = None

    def __post_init__(self):
        if not self.snapshots:
            raise ValueError(f'Team {self.team_id} has no snapshots.')
        roster = self.snapshots[0].members
        for snapshot in self.snapshots:
            if snapshot.members != roster:
                raise ValueError(f'Team {self.team_id}: snapshot {snapshot.timestep} changes the roster.')
        if len({snapshot.feature_dim for snapshot in self.snapshots}) != 1:
            raise ValueError(f'Team {self.team_id}: snapshots disagree on the feature dimension.')
        if len(self.labels) != len(roster):
            raise ValueError(f'Team {self.team_id} has {len(self.labels)} label rows for {len(roster)} members.')
        for row in self.labels:
            if len(row) != len(self.label_tasks):
                raise ValueError(f'Team {self.team_id} has a label row of length {len(row)} '
                                 f'for {len(self.label_tasks)} tasks.')
            if not all(math.isfinite(value) for value in row):
                raise ValueError(f'Team {self.team_id} has non-finite labels.')

    @property
    def group(self) -> str:
        return self.group_id if self.group_id is not None else self.team_id

    @property
    def members(self) -> ty.Tuple[int, ...]:
        return self.snapshots[0].members

    @property
    def n_members(self) -> int:
        return len(self.members)

    @property
    def n_snapshots(self) -> int:
        return len(self.snapshots)

    @property
    def feature_dim(self) -> int:
        return self.snapshots[0].feature_dim

    @functools.cached_property
    def label_matrix(self) -> np.ndarray:
        matrix = np.array(self.labels, dtype=np.float64).reshape(self.n_members, len(self.label_tasks))
        matrix.setflags(write=False)
        return matrix

    def task_labels(self, task: str) -> np.ndarray:
        if task not in self.label_tasks:
            raise KeyError(f"Team {self.team_id} has no labels for task '{task}'.")
        return self.label_matrix[:, self.label_tasks.index(task)]

    def feature_tensor(self) -> np.ndarray:
        """Features as a ``K x n x d`` array."""
        return np.stack([snapshot.feature_matrix for snapshot in self.snapshots])

    def mean_features(self) -> np.ndarray:
        """Per-member time mean of the feature rows, ``n x d``."""
        return self.feature_tensor().mean(axis=0)

    def union_edges(self) -> ty.Tuple[ty.Tuple[int, int], ...]:
        """Every directed edge present in at least one snapshot, in first-seen order."""
        seen: ty.Dict[ty.Tuple[int, int], None] = {}
        for snapshot in self.snapshots:
            for edge in snapshot.edges:
                seen.setdefault(tuple(edge), None)
        return tuple(seen)

    def edge_refs(self) -> ty.Tuple[EdgeRef, ...]:
        """Every temporal edge, ordered by snapshot then by stored order."""
        return tuple(
            EdgeRef(index, src, dst) for index, snapshot in enumerate(self.snapshots) for src, dst in snapshot.edges
        )

    def without_edges(self, removed: ty.Iterable[EdgeRef]) -> 'DynamicTeam':
        """A copy of the team with the given temporal edges deleted."""
        removed_by_t: ty.Dict[int, ty.Set[ty.Tuple[int, int]]] = {}
        for ref in removed:
            removed_by_t.setdefault(ref.t, set()).add((ref.src, ref.dst))
        for t, edges in removed_by_t.items():
            if not 0 <= t < self.n_snapshots or not edges <= set(self.snapshots[t].edges):
                raise ValueError(f'Team {self.team_id}: cannot remove edges {sorted(edges)} absent from snapshot {t}.')
        snapshots = tuple(
            dataclasses.replace(
                snapshot, edges=tuple(edge for edge in snapshot.edges if edge not in removed_by_t.get(index, ()))
            ) if index in removed_by_t else snapshot for index, snapshot in enumerate(self.snapshots)
        )
        return dataclasses.replace(self, snapshots=snapshots)

    def permuted(self, order: ty.Sequence[int]) -> 'DynamicTeam':
        """
        Reorder the roster: position ``i`` of the result holds the member at
        position ``order[i]`` of this team. Edges are kept by member id.
        """
        if sorted(order) != list(range(self.n_members)):
            raise ValueError(f'{list(order)} is not a permutation of {self.n_members} members.')
        snapshots = tuple(
            dataclasses.replace(
                snapshot,
                members=tuple(snapshot.members[i] for i in order),
                features=tuple(snapshot.features[i] for i in order),
            ) for snapshot in self.snapshots
        )
        labels = tuple(self.labels[i] for i in order)
        return dataclasses.replace(self, snapshots=snapshots, labels=labels)

    def with_features(self, features: np.ndarray) -> 'DynamicTeam':
        """A copy of the team carrying a replacement ``K x n x d`` feature array."""
        features = np.asarray(features, dtype=np.float64)
        expected = (self.n_snapshots, self.n_members, self.feature_dim)
        if features.shape != expected:
            raise ValueError(f'Team {self.team_id}: feature array has shape {features.shape}, expected {expected}.')
        snapshots = tuple(
            dataclasses.replace(snapshot, features=tuple(tuple(row) for row in features[index].tolist()))
            for index, snapshot in enumerate(self.snapshots)
        )
        return dataclasses.replace(self, snapshots=snapshots)


@dataclasses.dataclass(frozen=True)
class TeamDataset:
    """A collection of dynamic teams sharing the feature dimension and task list."""
    teams: ty.Tuple[DynamicTeam, ...]
    task_scales: ty.Dict[str, ty.Tuple[float, float]]

    def __post_init__(self):
        if not self.teams:
            raise ValueError('A dataset needs at least one team.')
        if len({team.feature_dim for team in self.teams}) != 1:
            raise ValueError('Teams disagree on the feature dimension.')
        if len({team.label_tasks for team in self.teams}) != 1:
            raise ValueError('Teams disagree on the task list.')
        if len({team.team_id for team in self.teams}) != len(self.teams):
            raise ValueError('Team ids are not unique.')
        for team in self.teams:
            for column, task in enumerate(team.label_tasks):
                if task not in self.task_scales:
                    raise ValueError(f"Task '{task}' of team {team.team_id} has no declared scale.")
                low, high = self.task_scales[task]
                values = team.label_matrix[:, column]
                if values.min() < low or values.max() > high:
                    raise ValueError(f"Team {team.team_id}: labels of task '{task}' leave the scale [{low}, {high}].")

    @property
    def tasks(self) -> ty.Tuple[str, ...]:
        return self.teams[0].label_tasks

    @property
    def feature_dim(self) -> int:
        return self.teams[0].feature_dim

    @property
    def groups(self) -> ty.Tuple[str, ...]:
        """Group ids in first-seen order."""
        return tuple(dict.fromkeys(team.group for team in self.teams))

    def teams_in(self, groups: ty.Iterable[str]) -> ty.Tuple[DynamicTeam, ...]:
        wanted = set(groups)
        return tuple(team for team in self.teams if team.group in wanted)
