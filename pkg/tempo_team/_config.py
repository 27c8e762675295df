# -*- coding: utf-8 -*-
"""
Helpers for managing the run configuration document.

A run configuration is a single JSON document (YAML is accepted as well, since
it is read with ``yaml.safe_load``). Command line flags override its fields.
"""

import collections.abc
import json
import pathlib
import typing as ty

import yaml
from voluptuous import All, Any, Coerce, In, Invalid, Length, MultipleInvalid, Range, Required, Schema

CONFIG_FILE_NAME = '.tempo-team.json'

PARADIGMS = ('snn', 'tnn', 'renn', 'trenn', 'mt-trenn')

_POSITIVE_INT = All(int, Range(min=1))
_NON_NEGATIVE_INT = All(int, Range(min=0))
_UNIT = All(Coerce(float), Range(min=0.0, max=1.0))

SYNTH_SCHEMA = Schema({
    Required('seed', default=0): int,
    Required('teams', default=12): All(int, Range(min=3)),
    Required('roster', default=4): In((3, 4)),
    Required('snapshots', default=20): _POSITIVE_INT,
    Required('features', default=16): _POSITIVE_INT,
    Required('relational_strength', default=1.0): _UNIT,
    Required('temporal_strength', default=1.0): _UNIT,
    Required('noise', default=0.1): All(Coerce(float), Range(min=0.0)),
})

MODEL_SCHEMA = Schema({
    Required('paradigm', default='mt-trenn'): In(PARADIGMS),
    Required('hidden', default=16): _POSITIVE_INT,
    Required('gcn_layers', default=2): _POSITIVE_INT,
    Required('heads', default=2): _POSITIVE_INT,
    Required('head_dim', default=None): Any(None, _POSITIVE_INT),
    Required('positional_encoding', default=True): bool,
    Required('gcn_bias', default=True): bool,
    Required('head_hidden', default=16): _POSITIVE_INT,
    Required('activation', default='relu'): In(('relu', 'identity')),
    Required('init_seed', default=0): int,
})

LOSS_SCHEMA = Schema({
    Required('ranking_margin', default=1.0): All(Coerce(float), Range(min=0.0)),
    Required('ranking_coeff', default=0.1): All(Coerce(float), Range(min=0.0)),
    Required('ranking_tasks', default=['EL']): [str],
})

TRAIN_SCHEMA = Schema({
    Required('tasks', default=None): Any(None, All([str], Length(min=1))),
    Required('lr', default=1e-3): All(Coerce(float), Range(min=0.0, min_included=False)),
    Required('beta1', default=0.9): All(Coerce(float), Range(min=0.0, max=1.0, max_included=False)),
    Required('beta2', default=0.999): All(Coerce(float), Range(min=0.0, max=1.0, max_included=False)),
    Required('eps', default=1e-8): All(Coerce(float), Range(min=0.0, min_included=False)),
    Required('max_epochs', default=300): _POSITIVE_INT,
    Required('patience', default=20): _NON_NEGATIVE_INT,
    Required('standardize_targets', default=True): bool,
})


class ConfigError(ValueError):
    """Raised when a run configuration does not match the schema."""


class RunConfig(collections.abc.MutableMapping):
    """Configuration of a ``tempo-team`` run."""

    schema = Schema({
        Required('dataset', default=None): Any(None, str),
        Required('synth', default={}): SYNTH_SCHEMA,
        Required('model', default={}): MODEL_SCHEMA,
        Required('loss', default={}): LOSS_SCHEMA,
        Required('train', default={}): TRAIN_SCHEMA,
        Required('seeds', default=list(range(10))): All([int], Length(min=1)),
        Required('jobs', default=1): _POSITIVE_INT,
        Required('record_timing', default=True): bool,
        Required('out', default='runs'): str,
    })

    def __init__(self, config=None, file_path=None):
        self._dict = self.validate(config or {})
        self._file_path = file_path

    @classmethod
    def validate(cls, config: ty.Mapping) -> dict:
        """Validate a configuration dictionary and fill in defaults."""
        try:
            return cls.schema(dict(config))
        except MultipleInvalid as exc:
            raise ConfigError('; '.join(_describe(error) for error in exc.errors)) from exc

    @classmethod
    def from_file(cls, path: ty.Union[str, pathlib.Path]) -> 'RunConfig':
        """Parse a configuration document."""
        path = pathlib.Path(path)
        with open(path, encoding='utf8') as config_file:
            try:
                config = yaml.safe_load(config_file) or {}
            except yaml.YAMLError as exc:
                raise ConfigError(f"Could not parse configuration file '{path}': {exc}") from exc
        if not isinstance(config, dict):
            raise ConfigError(f"Configuration file '{path}' must contain a mapping at the top level.")
        return cls(config, file_path=path)

    @classmethod
    def search(cls) -> 'RunConfig':
        """
        Parses the configuration file ``.tempo-team.json``.

        The file is searched in the current working directory and all its parent
        directories. Without a file, the defaults are returned.
        """
        cwd = pathlib.Path().cwd()
        for dir_path in [cwd, *cwd.parents]:
            config_file_path = dir_path / CONFIG_FILE_NAME
            if config_file_path.exists():
                return cls.from_file(config_file_path)
        return cls()

    def to_file(self, path: ty.Union[str, pathlib.Path]) -> None:
        """Write the resolved configuration as JSON."""
        with open(path, 'w', encoding='utf8') as handle:
            json.dump(self._dict, handle, indent=2, sort_keys=True)
            handle.write('\n')

    def override(self, section: ty.Optional[str] = None, **fields) -> None:
        """Override fields with the given values, skipping ``None``. Revalidates."""
        updated = json.loads(json.dumps(self._dict))
        target = updated if section is None else updated[section]
        for key, value in fields.items():
            if value is not None:
                target[key] = value
        self._dict = self.validate(updated)

    def as_dict(self) -> dict:
        """Deep copy of the resolved configuration."""
        return json.loads(json.dumps(self._dict))

    @property
    def file_path(self):
        """
        Path of the document this configuration was read from, if any.
        """
        return self._file_path

    def __getitem__(self, item):
        return self._dict.__getitem__(item)

    def __setitem__(self, key, value):
        updated = dict(self._dict)
        updated[key] = value
        self._dict = self.validate(updated)

    def __delitem__(self, key):
        """Remove an entry; the schema puts its default back."""
        updated = dict(self._dict)
        del updated[key]
        self._dict = self.validate(updated)

    def __iter__(self):
        return self._dict.__iter__()

    def __len__(self):
        return self._dict.__len__()


def _describe(error: Invalid) -> str:
    path = ''.join(f'[{part}]' if isinstance(part, int) else f'.{part}' for part in error.path)
    return '$' + path + ': ' + error.error_message
