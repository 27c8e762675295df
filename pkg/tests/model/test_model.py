# -*- coding: utf-8 -*-
"""
Tests for the team model, its checkpoints and the model configuration.
"""

import json

import numpy as np
import pytest

from tempo_team.decoders_losses import HeadSpec
from tempo_team.encoders import EncoderSpec
from tempo_team.model import CHECKPOINT_FORMAT, ModelConfig, TeamModel
from tempo_team.numerics import ShapeError


def _model(paradigm='trenn', tasks=('EL', 'TW_A'), d_in=2, seed=0):
    return TeamModel.create(EncoderSpec(paradigm, d_in=d_in, hidden=4), HeadSpec(tasks=tasks, d_in=4), seed=seed)


def test_create_is_reproducible(synth_team_factory):
    team = synth_team_factory(seed=0, d=2)
    np.testing.assert_array_equal(_model(seed=3).predict(team), _model(seed=3).predict(team))
    assert not np.allclose(_model(seed=3).predict(team), _model(seed=4).predict(team))


def test_prediction_shape(synth_team_factory):
    team = synth_team_factory(seed=1, roster_size=3, d=2)
    assert _model(tasks=('EL', 'TW_A', 'LS_dominance')).predict(team).shape == (3, 3)


def test_checkpoint_round_trip(synth_team_factory, tmp_path):
    """A saved and reloaded model predicts identically, normalisation included."""
    team = synth_team_factory(seed=2, d=2)
    model = _model()
    model.set_normalisation([0.5, -1.0], [2.0, 0.5], [3.0, 4.0], [1.5, 2.0])
    path = tmp_path / 'model.json'
    model.save(path)
    loaded = TeamModel.load(path)
    assert loaded.encoder_spec == model.encoder_spec
    assert loaded.head_spec == model.head_spec
    np.testing.assert_array_equal(loaded.predict(team), model.predict(team))


def test_checkpoint_format(tmp_path):
    content = _model().to_dict()
    assert content['format'] == CHECKPOINT_FORMAT
    content['format'] = 'something-else/9'
    path = tmp_path / 'model.json'
    path.write_text(json.dumps(content), encoding='utf8')
    with pytest.raises(ValueError, match='Unsupported checkpoint format'):
        TeamModel.load(path)


def test_copy_is_independent(synth_team_factory):
    team = synth_team_factory(seed=3, d=2)
    model = _model()
    clone = model.copy()
    clone.params.assign({'head.EL.b2': [[10.0]]})
    assert not np.allclose(clone.predict(team)[:, 0], model.predict(team)[:, 0])
    np.testing.assert_array_equal(clone.predict(team)[:, 1], model.predict(team)[:, 1])


def test_target_mapping(synth_team_factory):
    """Predictions are head outputs times the target scale plus the target shift."""
    team = synth_team_factory(seed=4, d=2)
    model = _model()
    raw = model.forward_standardised(team).numpy()
    model.set_normalisation(target_shift=[3.0, -2.0], target_scale=[2.0, 0.5])
    np.testing.assert_allclose(model.predict(team), raw * [2.0, 0.5] + [3.0, -2.0])
    np.testing.assert_allclose(model.standardise_targets([[5.0, -1.0]]), [[1.0, 2.0]])


def test_input_standardisation(synth_team_factory):
    """Shifting and scaling the features is undone by matching input constants."""
    team = synth_team_factory(seed=5, d=2)
    model = _model()
    expected = model.predict(team)
    shift, scale = np.array([4.0, -3.0]), np.array([2.0, 0.25])
    moved = team.with_features(team.feature_tensor() * scale + shift)
    model.set_normalisation(input_shift=shift, input_scale=scale)
    np.testing.assert_allclose(model.predict(moved), expected, rtol=1e-9, atol=1e-12)


def test_normalisation_errors():
    model = _model()
    with pytest.raises(ValueError, match='positive'):
        model.set_normalisation(input_scale=[1.0, 0.0])
    with pytest.raises(ShapeError):
        model.set_normalisation(target_shift=[1.0, 2.0, 3.0])


def test_width_mismatch():
    with pytest.raises(ShapeError):
        TeamModel.create(EncoderSpec('snn', d_in=2, hidden=4), HeadSpec(tasks=('EL', ), d_in=3))


def test_paradigm_names():
    assert _model().paradigm == 'mt-trenn'
    assert _model(tasks=('EL', )).paradigm == 'trenn'
    assert _model('renn').paradigm == 'renn'
    assert _model().alpha.shape == (1, 2)
    assert _model(tasks=('EL', )).alpha is None


def test_model_config_build():
    """mt-trenn builds one multi-task model; other paradigms one model per task."""
    tasks = ('EL', 'TW_A', 'TW_BB')
    (multi, ) = ModelConfig(paradigm='mt-trenn', hidden=4).build(2, tasks)
    assert multi.tasks == tasks
    assert multi.encoder_spec.paradigm == 'trenn'
    singles = ModelConfig(paradigm='tnn', hidden=4).build(2, tasks)
    assert [model.tasks for model in singles] == [('EL', ), ('TW_A', ), ('TW_BB', )]
    assert not np.allclose(singles[0].params['enc.mha.Wo'].data, singles[1].params['enc.mha.Wo'].data)
    with pytest.raises(ValueError, match='at least two tasks'):
        ModelConfig().build(2, ('EL', ))


def test_multi_task_is_smaller():
    """One shared encoder costs fewer parameters than an encoder per task."""
    tasks = ('EL', 'TW_A', 'TW_BB', 'LS_dominance')
    (multi, ) = ModelConfig(paradigm='mt-trenn').build(3, tasks)
    singles = ModelConfig(paradigm='trenn').build(3, tasks)
    assert multi.param_count() < sum(model.param_count() for model in singles)
