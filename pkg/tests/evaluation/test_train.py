# -*- coding: utf-8 -*-
"""
Tests for training with early stopping.
"""

import numpy as np
import pytest

from tempo_team.decoders_losses import LossConfig
from tempo_team.evaluation import TrainConfig, fit_normalisation, team_objective, team_targets, train_model
from tempo_team.model import ModelConfig

TASKS = ('EL', 'TW_A')


def _setup(dataset_factory, paradigm='snn'):
    dataset = dataset_factory(n_groups=3, units_per_group=2, roster_size=3, K=2, d=2, tasks=TASKS)
    (model, ) = ModelConfig(paradigm=paradigm, hidden=4, head_hidden=4).build(dataset.feature_dim, TASKS)
    fit_normalisation(model, dataset.teams)
    return dataset, model


def _mean_loss(model, teams):
    return float(np.mean([team_objective(model, team, LossConfig(), weighted=False).item() for team in teams]))


def test_fit_normalisation(dataset_factory):
    """Training rows are standardised to zero mean and unit deviation."""
    dataset, model = _setup(dataset_factory)
    rows = np.concatenate([team.feature_tensor().reshape(-1, 2) for team in dataset.teams])
    np.testing.assert_allclose(model.input_shift.reshape(-1), rows.mean(axis=0))
    np.testing.assert_allclose(model.input_scale.reshape(-1), rows.std(axis=0))
    targets = np.concatenate([team_targets(model, team) for team in dataset.teams])
    np.testing.assert_allclose(model.standardise_targets(targets).mean(axis=0), 0.0, atol=1e-12)
    fit_normalisation(model, dataset.teams, standardize_targets=False)
    np.testing.assert_array_equal(model.target_scale, [[1.0, 1.0]])


def test_training_lowers_the_loss(dataset_factory):
    dataset, model = _setup(dataset_factory, paradigm='mt-trenn')
    before = _mean_loss(model, dataset.teams)
    result = train_model(model, dataset.teams, dataset.teams, TrainConfig(lr=0.01, max_epochs=40, patience=40))
    assert result.best_val_loss < before
    assert _mean_loss(model, dataset.teams) == pytest.approx(result.best_val_loss)


def test_best_parameters_are_restored(dataset_factory):
    """After training the model holds the best epoch's parameters, and stopping follows the patience."""
    dataset, model = _setup(dataset_factory)
    train, val = dataset.teams_in(['g0', 'g1']), dataset.teams_in(['g2'])
    cfg = TrainConfig(lr=0.05, max_epochs=60, patience=2)
    result = train_model(model, train, val, cfg)
    assert len(result.val_history) == result.epochs
    assert result.best_val_loss == min(result.val_history)
    assert result.val_history[result.best_epoch - 1] == result.best_val_loss
    assert result.epochs == cfg.max_epochs or result.epochs - result.best_epoch == cfg.patience
    assert _mean_loss(model, val) == pytest.approx(result.best_val_loss)


def test_training_is_deterministic(dataset_factory):
    dataset, first = _setup(dataset_factory)
    _, second = _setup(dataset_factory)
    cfg = TrainConfig(lr=0.01, max_epochs=5)
    train_model(first, dataset.teams, (), cfg, seed=[3, 1])
    train_model(second, dataset.teams, (), cfg, seed=[3, 1])
    for name, array in first.params.arrays().items():
        np.testing.assert_array_equal(array, second.params[name].data)


def test_train_errors(dataset_factory):
    _, model = _setup(dataset_factory)
    with pytest.raises(ValueError, match='without training teams'):
        train_model(model, (), ())
    with pytest.raises(ValueError):
        TrainConfig(lr=0.0)
    with pytest.raises(ValueError):
        TrainConfig(max_epochs=0)
