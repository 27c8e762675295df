# -*- coding: utf-8 -*-
"""
Tests for gradient saliency and the expected-teamwork score.
"""

import numpy as np
import pytest

from tempo_team.decoders_losses import ALPHA_PARAM
from tempo_team.explain import AttributionMap, expected_teamwork, saliency, target_score, teamwork_level
from tempo_team.graph_extract import TW_TASKS
from tempo_team.model import ModelConfig
from tempo_team.numerics import Tensor, central_difference


def test_linear_model_gradient_is_exact(synth_team_factory, linear_model_factory):
    """For a one-member, one-snapshot linear model the saliency is the head weight vector."""
    weights = np.array([0.5, -2.0, 3.0])
    model = linear_model_factory(3, tasks=('EL', ), head_weights=weights)
    team = synth_team_factory(seed=0, roster_size=1, K=1, d=3, tasks=('EL', ))
    signed = saliency(model, team, target_member=0, target_task='EL', signed=True)
    np.testing.assert_allclose(signed.values[0, 0], weights, rtol=1e-12)
    np.testing.assert_allclose(saliency(model, team, 0, 'EL').values[0, 0], np.abs(weights), rtol=1e-12)


@pytest.mark.parametrize('paradigm', ['snn', 'tnn'])
def test_members_without_interaction_get_nothing(paradigm, synth_team_factory):
    """Paradigms without a graph never attribute one member's prediction to another member."""
    team = synth_team_factory(seed=1, roster_size=4, K=3, d=2, tasks=('EL', 'TW_A'))
    (model, ) = ModelConfig(paradigm=paradigm, hidden=4, activation='identity').build(2, ('EL', ))
    amap = saliency(model, team, target_member=2, target_task='EL')
    assert np.all(amap.values[[0, 1, 3]] == 0.0)
    assert np.any(amap.values[2] > 0.0)


def test_graph_spreads_attribution(synth_team_factory):
    """With trenn, a member's prediction depends on the members sending it edges."""
    team = synth_team_factory(seed=2, roster_size=3, K=2, d=2, edge_prob=1.0, tasks=('EL', ))
    (model, ) = ModelConfig(paradigm='trenn', hidden=4, activation='identity').build(2, ('EL', ))
    amap = saliency(model, team, target_member=0, target_task='EL')
    assert np.all(amap.per_member > 0.0)


def test_expected_teamwork(synth_team_factory, linear_model_factory):
    """Without edges the linear teamwork score averages the features evenly over members and time."""
    weights = np.arange(1.0, 9.0) / 8.0
    model = linear_model_factory(1, tasks=TW_TASKS, head_weights=weights.reshape(8, 1))
    team = synth_team_factory(seed=3, roster_size=4, K=2, d=1, edge_prob=0.0, tasks=TW_TASKS)
    assert expected_teamwork(model, team) == pytest.approx(weights.mean() * team.feature_tensor().mean())
    amap = saliency(model, team, signed=True)
    assert amap.values.shape == (4, 2, 1)
    np.testing.assert_allclose(amap.values, weights.mean() / 8.0)
    assert amap.target_task == 'expected_teamwork'
    assert amap.target_member is None


def test_target_errors(synth_team_factory, linear_model_factory):
    team = synth_team_factory(seed=4, d=1, tasks=('EL', ))
    model = linear_model_factory(1, tasks=('EL', ))
    with pytest.raises(ValueError, match='Expected teamwork needs heads'):
        expected_teamwork(model, team)
    with pytest.raises(ValueError, match='no head'):
        target_score(model, team, 'TW_A')
    with pytest.raises(ValueError, match='not in team'):
        target_score(model, team, ('EL', 99))


def test_attribution_map():
    values = np.arange(12.0).reshape(2, 3, 2)
    amap = AttributionMap('t', (5, 6), 'EL', None, values)
    np.testing.assert_allclose(amap.per_member_timestep, values.mean(axis=2))
    np.testing.assert_allclose(amap.per_member, [2.5, 8.5])
    assert amap.as_dict()['members'] == [5, 6]
    with pytest.raises(ValueError, match='non-negative'):
        AttributionMap('t', (5, 6), 'EL', None, -values)
    AttributionMap('t', (5, 6), 'EL', None, -values, signed=True)
    with pytest.raises(ValueError):
        AttributionMap('t', (5, ), 'EL', None, values)


@pytest.mark.parametrize('value, level', [(1.0, 1), (0.0, 1), (4.0, 4), (6.99, 7), (7.0, 7), (9.0, 7)])
def test_teamwork_level(value, level):
    assert teamwork_level(value) == level


def test_teamwork_level_errors():
    with pytest.raises(ValueError):
        teamwork_level(3.0, scale=(7.0, 1.0))
    with pytest.raises(ValueError):
        teamwork_level(3.0, bins=0)


def test_saliency_matches_finite_differences(synth_team_factory):
    """Signed attributions agree with central differences of the target prediction."""
    team = synth_team_factory(seed=5, roster_size=3, K=3, d=2, edge_prob=0.5, tasks=('EL', ))
    (model, ) = ModelConfig(paradigm='trenn', hidden=4, activation='identity').build(2, ('EL', ), seed=5)
    amap = saliency(model, team, target_member=1, target_task='EL', signed=True)
    inputs = [Tensor(snapshot.feature_matrix) for snapshot in team.snapshots]
    for t, tensor in enumerate(inputs):
        numeric = central_difference(lambda: target_score(model, team, ('EL', 1), inputs), tensor)
        np.testing.assert_allclose(amap.values[:, t, :], numeric, rtol=1e-3, atol=1e-6)


def test_constant_teamwork(synth_team_factory, linear_model_factory):
    """Heads that ignore the embedding give their bias as the expected teamwork."""
    model = linear_model_factory(1, tasks=TW_TASKS, head_weights=np.zeros((8, 1)))
    model.params.assign({f'head.{task}.b2': [[3.5]] for task in TW_TASKS})
    team = synth_team_factory(seed=6, roster_size=4, K=2, d=1, tasks=TW_TASKS)
    assert expected_teamwork(model, team) == pytest.approx(3.5)
    assert teamwork_level(expected_teamwork(model, team)) == 3


@pytest.mark.parametrize('target_member', [None, 1])
def test_saliency_scales_with_final_layer(target_member, synth_team_factory):
    """Doubling the output layer of the head doubles every attribution."""
    team = synth_team_factory(seed=4, roster_size=3, K=3, d=2, tasks=('EL', ))
    (model, ) = ModelConfig(paradigm='trenn', hidden=4).build(2, ('EL', ))
    before = saliency(model, team, target_member, 'EL', signed=True).values
    model.params.assign({name: 2.0 * model.params[name].data for name in ('head.EL.W2', 'head.EL.b2')})
    after = saliency(model, team, target_member, 'EL', signed=True).values
    np.testing.assert_allclose(after, 2.0 * before, rtol=1e-12, atol=1e-15)


def test_expected_teamwork_ignores_task_weights(synth_team_factory, linear_model_factory):
    """The loss weights exp(alpha) shape training only; the score is the plain mean of the teamwork heads."""
    weights = np.arange(1.0, 9.0) / 8.0
    model = linear_model_factory(1, tasks=TW_TASKS, head_weights=weights.reshape(8, 1))
    team = synth_team_factory(seed=5, roster_size=3, K=2, d=1, edge_prob=0.0, tasks=TW_TASKS)
    before = expected_teamwork(model, team)
    model.params.assign({ALPHA_PARAM: np.linspace(-2.0, 2.0, 8).reshape(1, 8)})
    assert expected_teamwork(model, team) == pytest.approx(before, rel=1e-12)
    assert before == pytest.approx(np.mean(model.predict(team)), rel=1e-12)
