# -*- coding: utf-8 -*-
"""
Tests for the run configuration document.
"""

import json

import pytest

from tempo_team._config import CONFIG_FILE_NAME, ConfigError, RunConfig


def test_defaults():
    config = RunConfig()
    assert config['model']['paradigm'] == 'mt-trenn'
    assert config['train']['max_epochs'] == 300
    assert config['seeds'] == list(range(10))
    assert config['synth']['roster'] == 4
    assert config.file_path is None


def test_override():
    """Overrides replace fields, skip ``None`` and are validated."""
    config = RunConfig()
    config.override('train', lr=0.01, patience=None)
    assert config['train']['lr'] == 0.01
    assert config['train']['patience'] == 20
    config.override(jobs=3)
    assert config['jobs'] == 3
    with pytest.raises(ConfigError):
        config.override('model', paradigm='lstm')


def test_delete_restores_default():
    """Deleting a field revalidates the document, so the field falls back to its default."""
    config = RunConfig({'jobs': 4, 'model': {'paradigm': 'snn'}})
    del config['jobs']
    assert config['jobs'] == 1
    del config['model']
    assert config['model']['paradigm'] == 'mt-trenn'
    assert len(config) == len(RunConfig())
    with pytest.raises(KeyError):
        del config['colour']


@pytest.mark.parametrize(
    'document, path', [
        ({'model': {'paradigm': 'gru'}}, '$.model.paradigm'),
        ({'train': {'lr': 0}}, '$.train.lr'),
        ({'synth': {'roster': 6}}, '$.synth.roster'),
        ({'seeds': []}, '$.seeds'),
        ({'colour': 'blue'}, '$.colour'),
    ]
)
def test_invalid_documents(document, path):
    """Errors name the offending field."""
    with pytest.raises(ConfigError, match=path.replace('$', r'\$').replace('.', r'\.')):
        RunConfig(document)


def test_from_file(tmp_path):
    """JSON and YAML documents are both accepted."""
    json_path = tmp_path / 'run.json'
    json_path.write_text(json.dumps({'model': {'paradigm': 'renn'}, 'seeds': [1, 2]}), encoding='utf8')
    config = RunConfig.from_file(json_path)
    assert config['model']['paradigm'] == 'renn'
    assert config['seeds'] == [1, 2]
    assert config.file_path == json_path
    yaml_path = tmp_path / 'run.yml'
    yaml_path.write_text('train:\n  max_epochs: 5\n', encoding='utf8')
    assert RunConfig.from_file(yaml_path)['train']['max_epochs'] == 5


def test_from_file_errors(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text('[1, 2]', encoding='utf8')
    with pytest.raises(ConfigError, match='mapping'):
        RunConfig.from_file(path)
    path.write_text('model: [unclosed', encoding='utf8')
    with pytest.raises(ConfigError, match='Could not parse'):
        RunConfig.from_file(path)


def test_search(tmp_path, monkeypatch):
    """The configuration file is found in a parent directory."""
    (tmp_path / CONFIG_FILE_NAME).write_text(json.dumps({'jobs': 2}), encoding='utf8')
    nested = tmp_path / 'a' / 'b'
    nested.mkdir(parents=True)
    monkeypatch.chdir(nested)
    assert RunConfig.search()['jobs'] == 2


def test_to_file(tmp_path):
    config = RunConfig({'seeds': [7]})
    path = tmp_path / 'resolved.json'
    config.to_file(path)
    assert RunConfig.from_file(path).as_dict() == config.as_dict()
