# -*- coding: utf-8 -*-
"""
Tests for the synthetic dataset generators.
"""

import numpy as np
import pytest

from tempo_team.graph_extract import (
    ALL_TASKS, EL_TASK, SignalConfig, dataset_to_json, synth_aggression_team, synth_dataset
)


def test_deterministic():
    """The same seed reproduces the dataset; another seed does not."""
    first = synth_dataset(seed=3, n_teams=4, roster_size=3, K=4, d=2)
    second = synth_dataset(seed=3, n_teams=4, roster_size=3, K=4, d=2)
    assert dataset_to_json(first) == dataset_to_json(second)
    assert dataset_to_json(first) != dataset_to_json(synth_dataset(seed=4, n_teams=4, roster_size=3, K=4, d=2))


def test_shape():
    """Twelve teams of four give 48 labeled member rows per task."""
    dataset = synth_dataset(seed=0, n_teams=12, roster_size=4, K=5, d=3)
    assert dataset.tasks == ALL_TASKS
    assert dataset.feature_dim == 3
    assert sum(team.n_members for team in dataset.teams) == 48
    assert all(team.n_snapshots == 5 for team in dataset.teams)
    assert len(dataset.groups) == 12


@pytest.mark.parametrize('kwargs', [{'roster_size': 5}, {'n_teams': 2}, {'d': 0}])
def test_invalid_arguments(kwargs):
    """Rosters of 3 or 4, at least three teams and one feature are required."""
    arguments = {'seed': 0, 'n_teams': 4, 'roster_size': 3, 'K': 3, 'd': 2, **kwargs}
    with pytest.raises(ValueError):
        synth_dataset(**arguments)


def test_signal_config_validation():
    with pytest.raises(ValueError):
        SignalConfig(relational_strength=1.5)
    with pytest.raises(ValueError):
        SignalConfig(noise=-1.0)


def _degrees(team):
    """Out-degree and in-degree of every member, summed over snapshots."""
    index = {member: row for row, member in enumerate(team.members)}
    out_degree, in_degree = np.zeros(team.n_members), np.zeros(team.n_members)
    for snapshot in team.snapshots:
        for src, dst in snapshot.edges:
            out_degree[index[src]] += 1
            in_degree[index[dst]] += 1
    return out_degree, in_degree


def test_relational_signal():
    """Without noise, the EL label is an increasing function of the out-degree fraction."""
    dataset = synth_dataset(seed=1, n_teams=6, roster_size=4, K=8, d=2, signal_cfg=SignalConfig(noise=0.0))
    for team in dataset.teams:
        out_degree, _ = _degrees(team)
        fraction = out_degree / (team.n_snapshots * (team.n_members - 1))
        np.testing.assert_allclose(team.task_labels(EL_TASK), 1.0 + 4.0 * fraction)


def test_leader_lives_in_the_graph():
    """
    The top-EL member is the one addressed most, while speaking time does not
    single it out: every member is silent in some snapshots at similar rates.
    """
    dataset = synth_dataset(seed=5, n_teams=12, roster_size=4, K=20, d=2)
    matches = 0
    for team in dataset.teams:
        _, in_degree = _degrees(team)
        matches += int(np.argmax(team.task_labels(EL_TASK)) == np.argmax(in_degree))
    assert matches >= 11
    silent = np.array([[np.all(row == 0.0) for row in snapshot.feature_matrix] for team in dataset.teams
                       for snapshot in team.snapshots])
    leaders = [np.argmax(team.task_labels(EL_TASK)) for team in dataset.teams for _ in team.snapshots]
    leader_rate = silent[np.arange(len(leaders)), leaders].mean()
    assert abs(leader_rate - silent.mean()) < 0.1


def test_team_trend_drives_teamwork():
    """Without noise, TW labels are shared by the team and order teams by their channel-0 trend."""
    dataset = synth_dataset(seed=2, n_teams=8, roster_size=3, K=6, d=1, signal_cfg=SignalConfig(noise=0.0))
    trends, labels = [], []
    for team in dataset.teams:
        tw_a = team.task_labels('TW_A')
        np.testing.assert_allclose(tw_a, tw_a[0])
        channel = team.feature_tensor()[:, :, 0]
        speaking = channel != 0.0
        time = np.arange(team.n_snapshots)[:, None] * np.ones_like(channel)
        slopes = [np.polyfit(time[speaking[:, m], m], channel[speaking[:, m], m], 1)[0]
                  for m in range(team.n_members) if speaking[:, m].sum() >= 2]
        trends.append(np.mean(slopes))
        labels.append(tw_a[0])
    ranks = np.argsort(np.argsort(trends)), np.argsort(np.argsort(labels))
    assert np.corrcoef(*ranks)[0, 1] > 0.7


def test_labels_on_scale():
    """Every label lies on its task's scale even with heavy noise."""
    dataset = synth_dataset(seed=2, n_teams=5, roster_size=3, K=3, d=1, signal_cfg=SignalConfig(noise=5.0))
    for task in ALL_TASKS:
        low, high = dataset.task_scales[task]
        values = np.concatenate([team.task_labels(task) for team in dataset.teams])
        assert values.min() >= low and values.max() <= high


@pytest.mark.parametrize('seed', range(10))
def test_aggression_team(seed):
    """The planted edge is the aggressor's only out-edge in its snapshot, and the aggressor's row is negative."""
    team, planted = synth_aggression_team(seed)
    snapshot = team.snapshots[planted.t]
    assert [(src, dst) for src, dst in snapshot.edges if src == planted.src] == [(planted.src, planted.dst)]
    assert snapshot.feature_matrix[snapshot.index_of[planted.src]][0] == -100.0
    others = np.delete(team.feature_tensor(), planted.src, axis=1)
    assert others.min() > 0
