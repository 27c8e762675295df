# -*- coding: utf-8 -*-
"""
Synthetic team recordings with planted relational and temporal signals.

The generator produces interaction events and runs them through
:func:`segment_events`, so synthetic teams take the same path as recorded ones.
"""

import dataclasses
import logging
import typing as ty

import numpy as np

from ._segment import segment_events
from ._types import (
    ALL_TASKS, EL_TASK, TASK_SCALES, TW_TASKS, DynamicTeam, EdgeRef, InteractionEvent, SegmentationConfig,
    StaticTeamSnapshot, TeamDataset
)

__all__ = ('SignalConfig', 'synth_dataset', 'synth_aggression_team')

logger = logging.getLogger(__name__)

_SPEAK_PROB = 0.8
# Turns of the leader reach each member, and turns of the others reach the
# leader, with the first probability; turns between the others with the second.
_LEAD_ADDRESS_PROB = 0.9
_PEER_ADDRESS_PROB = 0.3


@dataclasses.dataclass(frozen=True)
class SignalConfig:
    """
    relational_strength :
        Weight of the out-degree fraction in the EL and dominance labels;
        zero makes them independent of the recording.
    temporal_strength :
        Weight of the channel-0 trend in the TW labels and of the channel-0
        level in friendliness; zero makes them independent of the recording.
    noise :
        Standard deviation of the label noise and of the feature noise.
    subsegment_len_s :
        Seconds per snapshot of the simulated recording.
    """
    relational_strength: float = 1.0
    temporal_strength: float = 1.0
    noise: float = 0.1
    subsegment_len_s: float = 3.0

    def __post_init__(self):
        for name in ('relational_strength', 'temporal_strength'):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f'{name} must lie in [0, 1].')
        if self.noise < 0:
            raise ValueError('noise must be non-negative.')


def synth_dataset(
    seed: int,
    n_teams: int,
    roster_size: int,
    K: int,
    d: int,
    signal_cfg: SignalConfig = SignalConfig(),
) -> TeamDataset:  # pylint: disable=invalid-name
    """
    Generate ``n_teams`` teams of ``roster_size`` members observed over ``K``
    snapshots with ``d`` features. Deterministic under ``seed``.

    Every member speaks equally often with identically distributed payloads,
    so a member's own feature rows say nothing about leadership. Each team has
    a designated leader who addresses the others in most of their turns and is
    addressed back; the EL and dominance labels increase with a member's
    out-degree fraction, which only the interaction graph carries.

    Feature channel 0 of each member drifts with the team trend plus a
    member-specific trend of the same spread. TW labels follow the team-mean
    channel-0 trend, so a member's own sequence only gives a noisy estimate of
    its label and the neighbours' sequences sharpen it.
    """
    if roster_size not in (3, 4):
        raise ValueError(f'Roster size must be 3 or 4, got {roster_size}.')
    if n_teams < 3:
        raise ValueError(f'At least 3 teams are needed, got {n_teams}.')
    if d < 1 or K < 1:
        raise ValueError('Feature dimension and snapshot count must be at least 1.')
    rng = np.random.default_rng(seed)
    task_weights = rng.uniform(0.6, 1.0, size=len(TW_TASKS))
    teams = tuple(
        _synth_team(f'team-{index:02d}', rng, roster_size, K, d, signal_cfg, task_weights) for index in range(n_teams)
    )
    logger.info('Synthesised %d teams (roster %d, K=%d, d=%d, seed %d).', n_teams, roster_size, K, d, seed)
    return TeamDataset(teams=teams, task_scales={task: TASK_SCALES[task] for task in ALL_TASKS})


def _synth_team(
    team_id: str,
    rng: np.random.Generator,
    roster_size: int,
    K: int,
    d: int,
    cfg: SignalConfig,
    task_weights: np.ndarray,
) -> DynamicTeam:  # pylint: disable=too-many-arguments,too-many-locals,invalid-name
    roster = tuple(range(roster_size))
    leader = int(rng.integers(roster_size))
    level = rng.normal(size=roster_size)
    own_trend = rng.normal(size=roster_size)
    team_trend = rng.normal()
    step = cfg.subsegment_len_s

    events = []
    for snapshot in range(K):
        progress = 2.0 * snapshot / (K - 1) - 1.0 if K > 1 else 0.0
        for member in roster:
            if rng.uniform() >= _SPEAK_PROB:
                continue
            start = snapshot * step + rng.uniform(0.0, 0.5) * step
            end = start + rng.uniform(0.3, 0.5) * step
            payload = rng.normal(scale=1.0, size=d)
            payload[0] = 1.0 + level[member] + (team_trend + own_trend[member]) * progress + cfg.noise * rng.normal()
            addressees = _addressees(rng, roster, member, leader)
            events.append(InteractionEvent(member, start, end, tuple(payload.tolist()), addressees))
    events.sort(key=lambda event: (event.t_start, event.member_id))

    seg_cfg = SegmentationConfig(annotation_freq_f=K * step, subsegment_len_s=step, feature_dim_d=d)
    (snapshots, ) = segment_events(events, K * step, seg_cfg, roster)

    out_fraction = np.array([sum(sum(1 for src, _ in snap.edges if src == member) for snap in snapshots)
                             for member in roster]) / (K * (roster_size - 1))
    trend_stat = np.full(roster_size, np.tanh(team_trend + own_trend.mean()))
    rho, gamma = cfg.relational_strength, cfg.temporal_strength

    def _noise():
        return cfg.noise * rng.normal(size=roster_size)

    columns = {
        EL_TASK: 1.0 + 4.0 * (rho * out_fraction + (1.0 - rho) * rng.uniform(size=roster_size)) + _noise(),
        'LS_dominance': 1.0 + 4.0 * (rho * out_fraction + (1.0 - rho) * rng.uniform(size=roster_size)) + _noise(),
        'LS_friendliness': 3.0 + 1.8 * (gamma * np.tanh(level) +
                                        (1.0 - gamma) * rng.uniform(-1.0, 1.0, size=roster_size)) + _noise(),
        'LS_task_orientation': 3.0 + 1.8 * (gamma * np.tanh(team_trend) +
                                            (1.0 - gamma) * rng.uniform(-1.0, 1.0, size=roster_size)) + _noise(),
    }
    for weight, task in zip(task_weights, TW_TASKS):
        columns[task] = 4.0 + 2.7 * (gamma * weight * trend_stat +
                                     (1.0 - gamma) * rng.uniform(-1.0, 1.0, size=roster_size)) + _noise()
    for task, values in columns.items():
        low, high = TASK_SCALES[task]
        columns[task] = np.clip(values, low, high)

    labels = tuple(tuple(float(columns[task][row]) for task in ALL_TASKS) for row in range(roster_size))
    return DynamicTeam(team_id=team_id, snapshots=tuple(snapshots), labels=labels, label_tasks=ALL_TASKS)


def _addressees(rng: np.random.Generator, roster: ty.Tuple[int, ...], speaker: int, leader: int) -> ty.Tuple[int, ...]:
    """The members one turn is directed at; never empty."""
    others = [member for member in roster if member != speaker]
    probs = [_LEAD_ADDRESS_PROB if speaker == leader or member == leader else _PEER_ADDRESS_PROB for member in others]
    chosen = tuple(member for member, prob in zip(others, probs) if rng.uniform() < prob)
    if chosen:
        return chosen
    return (leader, ) if speaker != leader else (int(rng.choice(others)), )


def synth_aggression_team(
    seed: int,
    roster_size: int = 4,
    K: int = 3,
    d: int = 1,
    amplitude: float = 100.0,
    edge_prob: float = 0.3,
) -> ty.Tuple[DynamicTeam, EdgeRef]:  # pylint: disable=invalid-name,too-many-arguments
    """
    A team whose only strongly negative interaction is a single planted edge.

    Every member has positive features except the aggressor in the planted
    snapshot, whose row is ``-amplitude``; the aggressor sends exactly one edge
    in that snapshot. Background edges are drawn with ``edge_prob`` elsewhere.
    Returns the team and the planted edge.
    """
    rng = np.random.default_rng(seed)
    roster = tuple(range(roster_size))
    aggressor = int(rng.integers(roster_size))
    victim = int(rng.choice([member for member in roster if member != aggressor]))
    planted_t = int(rng.integers(K))
    snapshots = []
    for t in range(K):
        features = rng.uniform(0.5, 1.5, size=(roster_size, d))
        edges = [(src, dst) for src in roster for dst in roster
                 if src != dst and not (t == planted_t and src == aggressor) and rng.uniform() < edge_prob]
        if t == planted_t:
            features[aggressor] = -amplitude
            edges.append((aggressor, victim))
        snapshots.append(
            StaticTeamSnapshot(
                timestep=t,
                members=roster,
                edges=tuple(edges),
                features=tuple(tuple(row) for row in features.tolist()),
            )
        )
    labels = tuple(
        tuple(float(rng.uniform(*TASK_SCALES[task])) for task in ALL_TASKS) for _ in roster
    )
    team = DynamicTeam(
        team_id=f'aggression-{seed}', snapshots=tuple(snapshots), labels=labels, label_tasks=ALL_TASKS
    )
    return team, EdgeRef(planted_t, aggressor, victim)
