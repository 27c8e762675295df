# -*- coding: utf-8 -*-
"""
Segmentation of interaction-event streams into snapshot sequences, and the
construction of dynamic teams from labeled segments.
"""

import logging
import math
import typing as ty

import numpy as np

from ._types import DynamicTeam, InteractionEvent, SegmentationConfig, StaticTeamSnapshot, ceil_ratio

__all__ = ('segment_events', 'build_dynamic_teams')

logger = logging.getLogger(__name__)


def segment_events(
    events: ty.Sequence[InteractionEvent],
    total_len: float,
    cfg: SegmentationConfig,
    roster: ty.Sequence[int],
) -> ty.List[ty.List[StaticTeamSnapshot]]:
    """
    Cut an event stream into ``ceil(total_len / f)`` labeled segments of
    ``ceil(f / s)`` snapshots each.

    A member active anywhere inside a snapshot window sends a directed edge to
    every other roster member in that snapshot, or only to the addressees of
    its events when all of them name addressees. The member's feature row is
    the mean of the payloads overlapping the window, or zeros when silent.
    """
    roster = tuple(roster)
    if not roster:
        raise ValueError('Cannot segment events for an empty roster.')
    if len(set(roster)) != len(roster):
        raise ValueError(f'Roster {list(roster)} lists a member twice.')
    if not total_len > 0:
        raise ValueError(f'Stream length must be positive, got {total_len}s.')
    known = set(roster)
    previous_start = -math.inf
    for index, event in enumerate(events):
        if event.member_id not in known:
            raise ValueError(f'Event {index} belongs to member {event.member_id}, who is not in the roster.')
        if event.addressees is not None and not known.issuperset(event.addressees):
            raise ValueError(f'Event {index} addresses members {sorted(set(event.addressees) - known)}, '
                             'who are not in the roster.')
        if len(event.feature_payload) != cfg.feature_dim_d:
            raise ValueError(f'Event {index} has {len(event.feature_payload)} features, expected {cfg.feature_dim_d}.')
        if not all(math.isfinite(value) for value in event.feature_payload):
            raise ValueError(f'Event {index} has a non-finite payload.')
        if event.t_start < previous_start:
            raise ValueError(f'Events are not sorted by t_start (event {index}).')
        previous_start = event.t_start
        if event.t_end > total_len:
            raise ValueError(f'Event {index} ends at {event.t_end}s, after the stream end {total_len}s.')

    n_segments = ceil_ratio(total_len, cfg.annotation_freq_f)
    per_segment = cfg.snapshots_per_segment
    segments: ty.List[ty.List[StaticTeamSnapshot]] = []
    for segment in range(n_segments):
        segment_start = segment * cfg.annotation_freq_f
        segment_end = segment_start + cfg.annotation_freq_f
        snapshots = []
        for step in range(per_segment):
            window_start = segment_start + step * cfg.subsegment_len_s
            window_end = min(window_start + cfg.subsegment_len_s, segment_end)
            snapshots.append(_snapshot(events, roster, step, window_start, window_end, cfg.feature_dim_d))
        segments.append(snapshots)
    logger.debug('Segmented %d events into %d segments of %d snapshots.', len(events), n_segments, per_segment)
    return segments


def _snapshot(
    events: ty.Sequence[InteractionEvent],
    roster: ty.Tuple[int, ...],
    timestep: int,
    window_start: float,
    window_end: float,
    feature_dim: int,
) -> StaticTeamSnapshot:
    payloads: ty.Dict[int, ty.List[ty.Tuple[float, ...]]] = {member: [] for member in roster}
    # None once any event of the member addresses the whole team.
    addressed: ty.Dict[int, ty.Optional[ty.Set[int]]] = {member: set() for member in roster}
    for event in events:
        if event.t_start >= window_end:
            break
        if event.t_end > window_start:
            payloads[event.member_id].append(event.feature_payload)
            targets = addressed[event.member_id]
            if event.addressees is None:
                addressed[event.member_id] = None
            elif targets is not None:
                targets.update(event.addressees)
    features = tuple(
        tuple(np.mean(payloads[member], axis=0).tolist()) if payloads[member] else (0.0, ) * feature_dim
        for member in roster
    )
    edges: ty.List[ty.Tuple[int, int]] = []
    for src in roster:
        if not payloads[src]:
            continue
        targets = addressed[src]
        edges.extend((src, dst) for dst in roster if dst != src and (targets is None or dst in targets))
    return StaticTeamSnapshot(timestep=timestep, members=roster, edges=tuple(edges), features=features)


def build_dynamic_teams(
    team_id: str,
    segments: ty.Sequence[ty.Sequence[StaticTeamSnapshot]],
    segment_labels: ty.Sequence[ty.Mapping[int, ty.Mapping[str, float]]],
    tasks: ty.Sequence[str],
) -> ty.Tuple[DynamicTeam, ...]:
    """
    Pair every labeled segment with its annotation. Each unit becomes a
    :class:`DynamicTeam` named ``<team_id>/<k>``; all units of one recording
    share ``team_id`` as their group.
    """
    if len(segments) != len(segment_labels):
        raise ValueError(f'{len(segments)} segments but {len(segment_labels)} label sets for team {team_id}.')
    teams = []
    for index, (snapshots, labels) in enumerate(zip(segments, segment_labels)):
        roster = snapshots[0].members
        missing = [member for member in roster if member not in labels]
        if missing:
            raise ValueError(f'Segment {index} of team {team_id} has no labels for members {missing}.')
        rows = tuple(tuple(float(labels[member][task]) for task in tasks) for member in roster)
        teams.append(
            DynamicTeam(
                team_id=f'{team_id}/{index}',
                snapshots=tuple(snapshots),
                labels=rows,
                label_tasks=tuple(tasks),
                group_id=team_id,
            )
        )
    return tuple(teams)
